#pragma once

// JSON scenario documents.
//
//   {
//     "id": "diag_bump",
//     "polytope":   {"kind": "rectangle", "a": "1", "b": "1"},
//     "subvariety": {"kind": "diagonal_curve"},
//     "weight": {"reference": "product",
//                "perturbation": [{"kind": "bump", "amplitude": 1, "center": [0, 0], "width": 1}]},
//     "grid":   {"T": 12, "n_per_axis": 257},
//     "m_list": [1, 2, 4, 8, 16, 32, 64],
//     "outputs": ["kernel", "envelope", "ma", "volume_report", "report"],
//     "seed": 7
//   }
//
// Unknown keys are rejected. Side lengths are integers or strings "p/q".

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "rbk/geometry.hpp"

namespace rbk {

struct Scenario {
  std::string id;
  MomentPolytope polytope = MomentPolytope::interval(1);
  SubvarietyDescriptor subvariety;
  WeightSymbol weight;
  LogGrid grid;
  std::vector<int> m_list{8};
  std::vector<std::string> outputs;
  std::uint64_t seed = 0;

  Model model() const;
  bool wants(const std::string& output) const;
};

/// Errors: ParseError (malformed JSON, unknown key, wrong type; message carries
/// the line), ValidationError (failed invariant).
Scenario parse_scenario(const std::string& text);

Scenario load_scenario(const std::filesystem::path& path);

/// Every *.json under dir, sorted by file name.
std::vector<std::filesystem::path> scenario_files(const std::filesystem::path& dir);

/// Loads dir/<id>.json.
Scenario load_shipped(const std::filesystem::path& dir, const std::string& id);

const std::vector<std::string>& known_outputs();

}  // namespace rbk
