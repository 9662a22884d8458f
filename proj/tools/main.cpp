#include <exception>
#include <iostream>

#include "CLI11.hpp"
#include "brl/error.hpp"
#include "brl/threading.hpp"
#include "commands.hpp"
#include "common.hpp"

namespace {

void add_common_flags(CLI::App* cmd, std::uint64_t* seed, int* threads) {
  cmd->add_option("--seed", *seed, "base rng seed (all outputs are deterministic in it)");
  cmd->add_option("--threads", *threads, "worker thread cap (results are identical for any value)");
  cmd->set_config("--config", "", "flat key=value file; command-line flags win");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"conditional image-editing GAN with bilinear residual fusing layers"};
  app.set_version_flag("--version", brlgan::kVersion);
  app.require_subcommand(1);

  int threads = 1;

  brlgan::VerifyOpts vopts;
  CLI::App* verify = app.add_subcommand(
      "verify", "check the film-to-bilinear construction: outputs match, ranks stay <= 2");
  verify->add_option("--dims", vopts.dims, "feature dims as DxD'xO")->capture_default_str();
  verify->add_option("--trials", vopts.trials, "number of random parameterizations")
      ->capture_default_str();
  verify->add_option("--cond-draws", vopts.cond_draws, "conditioning draws per trial")
      ->capture_default_str();
  verify->add_option("--tol", vopts.tol, "max allowed |bilinear - film|")->capture_default_str();
  verify->add_option("--rank-tol", vopts.rank_tol, "relative singular value cutoff")
      ->capture_default_str();
  verify->add_option("--out", vopts.out, "directory for report.json");
  add_common_flags(verify, &vopts.seed, &threads);

  brlgan::GradcheckOpts gopts;
  CLI::App* gradcheck = app.add_subcommand(
      "gradcheck", "compare reverse-mode gradients against finite differences");
  gradcheck->add_option("--layer", gopts.layer,
                        "all or comma list of concat,film,bilinear,brl,loss_d,loss_g")
      ->capture_default_str();
  gradcheck->add_option("--draws", gopts.draws, "random draws per check")->capture_default_str();
  gradcheck->add_option("--out", gopts.out, "directory for gradcheck.csv");
  add_common_flags(gradcheck, &gopts.seed, &threads);

  brlgan::TrainOpts topts;
  CLI::App* train = app.add_subcommand("train", "train the editing GAN on shape-world data");
  train->add_option("--out", topts.out, "output directory (checkpoint + metrics.csv)")
      ->required();
  train->add_option("--epochs", topts.epochs, "training epochs")->capture_default_str();
  train->add_option("--lr", topts.lr, "learning rate")->capture_default_str();
  train->add_option("--beta1", topts.beta1, "adam first-moment decay")->capture_default_str();
  train->add_option("--beta2", topts.beta2, "adam second-moment decay")->capture_default_str();
  train->add_option("--batch", topts.batch, "batch size")->capture_default_str();
  train->add_option("--rank", topts.rank, "fusing rank d")->capture_default_str();
  train->add_option("--depth", topts.depth, "fusing layer count N")->capture_default_str();
  train->add_option("--embed-dim", topts.embed_dim, "attribute embedding width")
      ->capture_default_str();
  train->add_option("--d-channels", topts.d_channels,
                    "discriminator conv widths as \"c1,c2\" (default: generator widths)");
  train->add_option("--colors", topts.colors, "palette size")->capture_default_str();
  train->add_option("--shapes", topts.shapes, "comma list of square,circle,triangle")
      ->capture_default_str();
  train->add_option("--per-class", topts.per_class, "samples per attribute class")
      ->capture_default_str();
  train->add_option("--noise", topts.noise, "pixel noise std")->capture_default_str();
  train->add_option("--size", topts.size, "image size (multiple of 8)")->capture_default_str();
  train->add_option("--checkpoint-every", topts.checkpoint_every,
                    "also checkpoint every k epochs (0 = end only)")
      ->capture_default_str();
  train->add_flag("--no-squash", topts.no_squash,
                  "leave the discriminator output unsquashed (no logistic)");
  train->add_flag("--quiet", topts.quiet, "suppress per-epoch progress on stderr");
  add_common_flags(train, &topts.seed, &threads);

  brlgan::SampleOpts sopts;
  CLI::App* sample = app.add_subcommand("sample", "write an editing grid from a checkpoint");
  sample->add_option("--checkpoint", sopts.checkpoint, "checkpoint directory")->required();
  sample->add_option("--out", sopts.out, "output directory")->required();
  add_common_flags(sample, &sopts.seed, &threads);

  brlgan::EvalOpts eopts;
  CLI::App* eval = app.add_subcommand(
      "eval", "score checkpoints: inception-style score over an all-pairs editing grid");
  eval->add_option("--checkpoint", eopts.checkpoints, "checkpoint directory (repeatable)")
      ->required();
  eval->add_option("--splits", eopts.splits, "score splits")->capture_default_str();
  eval->add_option("--out", eopts.out, "output directory (is_score.csv + grids)")->required();
  add_common_flags(eval, &eopts.seed, &threads);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return brlgan::kExitUsage;
  }

  brl::set_max_threads(threads);
  try {
    if (verify->parsed()) return brlgan::cmd_verify(vopts);
    if (gradcheck->parsed()) return brlgan::cmd_gradcheck(gopts);
    if (train->parsed()) return brlgan::cmd_train(topts);
    if (sample->parsed()) return brlgan::cmd_sample(sopts);
    if (eval->parsed()) return brlgan::cmd_eval(eopts);
  } catch (const brl::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return brlgan::kExitUsage;
  } catch (const brl::ValueError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return brlgan::kExitUsage;
  } catch (const brl::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return brlgan::kExitCheckFailed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return brlgan::kExitCheckFailed;
  }
  return brlgan::kExitUsage;
}
