// Copyright 2026 The MDM Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Prints one PASS or FAIL line per acceptance criterion. Pass --quick for the
// reduced battery, or criterion numbers to run a subset.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "mdm/acceptance.hpp"

int main(int argc, char** argv) {
  mdm::AcceptanceOptions opts;
  opts.data_dir = MDM_DATA_DIR;
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) {
    std::string arg = argv[i];
    if (arg == "--quick")
      opts.quick = true;
    else
      only.push_back(std::atoi(arg.c_str()));
  }
  bool ok = true;
  for (int id : only.empty() ? mdm::criterion_ids() : only) {
    auto r = mdm::run_criterion(id, opts);
    std::cout << mdm::to_line(r) << std::endl;
    ok = ok && r.pass;
  }
  return ok ? 0 : 1;
}
