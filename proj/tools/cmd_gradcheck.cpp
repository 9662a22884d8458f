#include <algorithm>
#include <cstdio>
#include <iostream>
#include <sstream>

#include "brl/error.hpp"
#include "brl/gradcheck.hpp"
#include "commands.hpp"
#include "common.hpp"

namespace brlgan {

int cmd_gradcheck(const GradcheckOpts& opts) {
  std::vector<std::string> which;
  if (opts.layer == "all") {
    which = brl::gradcheck::all_checks();
  } else {
    std::stringstream ss(opts.layer);
    std::string token;
    while (std::getline(ss, token, ',')) {
      if (token.empty()) continue;
      const auto names = brl::gradcheck::all_checks();
      if (std::find(names.begin(), names.end(), token) == names.end()) {
        throw brl::ValueError("unknown --layer '" + token + "'");
      }
      which.push_back(token);
    }
  }
  if (which.empty()) throw brl::ValueError("no layers selected");

  const auto results = brl::gradcheck::run(which, opts.draws, opts.seed);

  std::string csv = "layer,max_rel_err\n";
  bool all_pass = true;
  for (const auto& r : results) {
    csv += r.name + "," + format_double(r.max_rel_err, 6) + "\n";
    all_pass = all_pass && r.pass;
  }
  std::cout << csv;
  if (!opts.out.empty()) {
    write_text_file(opts.out + "/gradcheck.csv", csv);
  }
  return all_pass ? kExitOk : kExitCheckFailed;
}

}  // namespace brlgan
