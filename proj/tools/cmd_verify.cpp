#include <cstdio>
#include <iostream>

#include "brl/analysis.hpp"
#include "brl/error.hpp"
#include "brl/tensor.hpp"
#include "commands.hpp"
#include "common.hpp"
#include "json.hpp"

namespace brlgan {

namespace {

// "8x4x6" -> {8, 4, 6}
std::vector<std::size_t> parse_dims(const std::string& dims) {
  std::vector<std::size_t> out;
  std::size_t start = 0;
  while (start <= dims.size()) {
    const std::size_t stop = dims.find('x', start);
    const std::string tok = dims.substr(start, stop == std::string::npos ? stop : stop - start);
    if (tok.empty()) throw brl::ValueError("bad --dims '" + dims + "', expected DxD'xO");
    out.push_back(static_cast<std::size_t>(std::stoull(tok)));
    if (stop == std::string::npos) break;
    start = stop + 1;
  }
  if (out.size() != 3 || out[0] == 0 || out[1] == 0 || out[2] == 0) {
    throw brl::ValueError("bad --dims '" + dims + "', expected DxD'xO with positive dims");
  }
  return out;
}

}  // namespace

int cmd_verify(const VerifyOpts& opts) {
  const auto dims = parse_dims(opts.dims);
  const std::size_t d = dims[0], dc = dims[1], o = dims[2];

  brl::Rng rng(brl::Rng::derive_seed(opts.seed, kStreamVerify));
  brl::analysis::VerifyOptions vopts;
  vopts.deviation_tol = opts.tol;
  vopts.rank_tol = opts.rank_tol;
  vopts.cond_draws = opts.cond_draws;

  // Each trial draws a fresh parameterization and checks one feature draw
  // against cond_draws conditioning vectors, so the report covers `trials`
  // independent parameterizations.
  double max_deviation = 0.0;
  std::vector<int> feature_ranks(o, 0);
  bool pass = true;
  for (std::size_t trial = 0; trial < opts.trials; ++trial) {
    const brl::FilmParams params(brl::gaussian_init(rng, {d, o}, 1.0),
                                 brl::gaussian_init(rng, {dc, o}, 1.0),
                                 brl::gaussian_init(rng, {dc, o}, 1.0));
    const auto report = brl::analysis::verify_film_equivalence(params, 1, rng, vopts);
    max_deviation = std::max(max_deviation, report.max_deviation);
    for (std::size_t i = 0; i < o; ++i) {
      feature_ranks[i] = std::max(feature_ranks[i], report.feature_ranks[i]);
    }
    pass = pass && report.pass;
  }

  nlohmann::json j;
  j["dims"] = {d, dc, o};
  j["trials"] = opts.trials;
  j["cond_draws"] = opts.cond_draws;
  j["seed"] = opts.seed;
  j["deviation_tol"] = opts.tol;
  j["rank_tol"] = opts.rank_tol;
  j["max_deviation"] = max_deviation;
  j["feature_ranks"] = feature_ranks;
  j["pass"] = pass;

  const std::string line = j.dump();
  std::cout << line << "\n";
  if (!opts.out.empty()) {
    write_text_file(opts.out + "/report.json", line + "\n");
  }
  return pass ? kExitOk : kExitCheckFailed;
}

}  // namespace brlgan
