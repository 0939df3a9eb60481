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

// The acceptance battery: one check per criterion, each reporting its counts
// and boundary tallies.

#ifndef MDM_ACCEPTANCE_HPP
#define MDM_ACCEPTANCE_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace mdm {

struct AcceptanceOptions {
  std::string data_dir;  // holds the bundled .mdm and .drv files
  bool quick = false;    // smaller corpora and universes
  std::uint64_t seed = 0;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

std::vector<int> criterion_ids();
CriterionResult run_criterion(int id, const AcceptanceOptions& opts);
/// Runs `only` (every criterion when empty) in order.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts, const std::vector<int>& only = {});
std::string to_line(const CriterionResult& r);

}  // namespace mdm

#endif  // MDM_ACCEPTANCE_HPP
