#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "flexslice/model.h"

namespace flexslice {

struct ExactLimits {
  // Refuse instances whose raw placement space, the product of
  // |N|^|N_s| over all slices, exceeds this.
  double max_placements = 1e7;
  std::optional<int> hop_bound;  // longest path tried; default |N| - 1
};

struct ExactResult {
  std::vector<AdmissionDecision> decisions;
  double objective = 0.0;
  std::int64_t visited = 0;  // search nodes, for diagnostics
};

// Joint optimum of gamma * N - (1 - gamma) * H over admission, configuration,
// injective placement and simple paths, with capacities shared by all slices.
// Node placements for all slices are enumerated before any routing (accept
// before reject, configurations in order, nodes ascending), then virtual links
// are routed jointly in slice and chain order over simple paths, shortest and
// lexicographically smallest first. Ties keep the first solution found. Throws SizeError past
// the guard and ParameterError for gamma outside [0, 1].
ExactResult brute_force(const PhysicalNetwork& net, const std::vector<SliceRequest>& slices,
                        double gamma, const ExactLimits& limits = {});

// The linearized model in CPLEX LP syntax. Variable names:
//   pi_s<s>                     slice accepted
//   xn_s<s>_v<v>_n<i>           VNF v on node i
//   xl_s<s>_v<v>_w<w>_l<l>      virtual link (v, w) uses physical link l
//   y_s<s>_v<v>_w<w>            w directly follows v
//   z_s<s>_v<v>_w<w>_l<l>       product of xl and y
//   th_s<s>_v<v>_p<p>           v sits at position p (1-based)
// Indices are slice, VNF and link positions in the inputs. big_m overrides
// both default constants and must exceed max(|N_s|, |N| - 1).
std::string export_lp(const PhysicalNetwork& net, const std::vector<SliceRequest>& slices,
                      double gamma, std::optional<double> big_m = std::nullopt);

// Rebuilds decisions from "name value" lines ('#' starts a comment). Missing
// variables are zero. Throws ParseError for unknown names, non-binary values
// and assignments that do not describe a chain embedding.
std::vector<AdmissionDecision> import_solution(const std::string& text,
                                               const PhysicalNetwork& net,
                                               const std::vector<SliceRequest>& slices);

// Inverse of import_solution: the nonzero variables of the decisions.
std::string encode_solution(const PhysicalNetwork& net, const std::vector<SliceRequest>& slices,
                            const std::vector<AdmissionDecision>& decisions);

}  // namespace flexslice
