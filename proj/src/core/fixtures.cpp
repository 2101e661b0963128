#include "netflow/fixtures.hpp"

namespace netflow::fixtures {

CriteriaMatrix e1_criteria() {
  return CriteriaMatrix({"613", "2573", "292", "162", "3062"}, {"C1", "C2", "C3", "C4"},
                        {
                            {0.62093, 0.70547, 0.734, 0.99189},
                            {0.8907, 0.85185, 0.666, 0.54054},
                            {0.81395, 0.97002, 0.4, 0.33784},
                            {0.77442, 0.82363, 0.734, 0},
                            {0.5814, 0.17637, 0.7, 0.67568},
                        });
}

ThresholdTriple e1_thresholds() { return {0.0, 0.1, 0.3}; }

PreferenceModel e1_traditional_model() {
  return uniform_thresholds_model({0.1, 0.4, 0.1, 0.4}, e1_thresholds());
}

PreferenceModel e1_mild_model() {
  return uniform_thresholds_model({0.4, 0.1, 0.4, 0.1}, e1_thresholds());
}

}  // namespace netflow::fixtures
