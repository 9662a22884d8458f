#ifndef BRLGAN_TOOLS_COMMANDS_HPP_
#define BRLGAN_TOOLS_COMMANDS_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace brlgan {

struct VerifyOpts {
  std::string dims = "8x4x6";  // DxD'xO
  std::size_t trials = 100;
  std::size_t cond_draws = 10;
  double tol = 1e-9;
  double rank_tol = 1e-10;
  std::uint64_t seed = 0;
  std::string out;
};
int cmd_verify(const VerifyOpts& opts);

struct GradcheckOpts {
  std::string layer = "all";
  std::size_t draws = 20;
  std::uint64_t seed = 0;
  std::string out;
};
int cmd_gradcheck(const GradcheckOpts& opts);

struct TrainOpts {
  std::string out;
  int epochs = 0;
  std::uint64_t seed = 0;
  double lr = 2e-4;
  double beta1 = 0.5;
  double beta2 = 0.999;
  int batch = 64;
  int rank = 8;
  int depth = 4;
  std::size_t embed_dim = 16;
  std::string d_channels;  // "8,12" or empty for the default
  std::size_t colors = 4;
  std::string shapes = "square,circle";
  std::size_t per_class = 12;
  double noise = 0.05;
  std::size_t size = 16;
  int checkpoint_every = 0;
  bool no_squash = false;
  bool quiet = false;
};
int cmd_train(const TrainOpts& opts);

struct SampleOpts {
  std::string checkpoint;
  std::string out;
  std::uint64_t seed = 0;
};
int cmd_sample(const SampleOpts& opts);

struct EvalOpts {
  std::vector<std::string> checkpoints;
  std::string out;
  std::size_t splits = 10;
  std::uint64_t seed = 0;
};
int cmd_eval(const EvalOpts& opts);

}  // namespace brlgan

#endif  // BRLGAN_TOOLS_COMMANDS_HPP_
