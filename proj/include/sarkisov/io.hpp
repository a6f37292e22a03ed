#pragma once

#include <json.hpp>

#include "sarkisov/graph.hpp"
#include "sarkisov/untwist.hpp"

namespace sarkisov {

using Json = nlohmann::json;

Json fan_to_json(const Fan& f);
Fan fan_from_json(const Json& j);

Json rat_to_json(const Rat& r); // "p/q" | "p" | "inf", bit-exact
Rat rat_from_json(const Json& j);

Json divisor_to_json(const InvariantDivisor& d);
InvariantDivisor divisor_from_json(const Json& j, size_t expected_size);

Json system_to_json(const MonomialLinearSystem& h);
MonomialLinearSystem system_from_json(const Json& j);

Json mat_to_json(const Mat& m);
Mat mat_from_json(const Json& j, int rows, int cols);

Json mfs_to_json(const ToricMoriFibreSpace& x);
ToricMoriFibreSpace mfs_from_json(const Json& j);

/// A factorization job: the map, plus either an explicit system on the target
/// or a polarization (m, A') from which |m(-K + f^*A')| is built.
struct Job {
    std::string name;
    ToricBirationalMap map;
    MonomialLinearSystem h_target;
};

Job job_from_json(const Json& j);
Job load_job(const std::string& path);

/// Threshold regression fixture: a model, a system and the expected values.
struct ThresholdCase {
    std::string name;
    ToricVariety variety;
    MonomialLinearSystem system;
    Rat expected_canonical;
    Rat expected_lc;
};
ThresholdCase threshold_case_from_json(const Json& j);
ThresholdCase load_threshold_case(const std::string& path);

Json degree_to_json(const SarkisovDegree& d);
Json augmented_to_json(const AugmentedSarkisovDegree& a);
Json step_to_json(const MmpStep& s);
Json link_to_json(const SarkisovLink& l);
Json sequence_to_json(const UntwistingSequence& s);
Json monotonicity_to_json(const MonotonicityReport& r);

Json load_json_file(const std::string& path);

} // namespace sarkisov
