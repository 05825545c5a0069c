#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "rfcount/trace.hpp"

namespace rfcount {

/// Half-open index span [begin, end).  Synth ground truth and the evaluation
/// stage express spans in fluctuation-series index space, the space all
/// window statistics and detection events live in.
struct SampleSpan {
    std::size_t begin = 0;
    std::size_t end = 0;

    std::size_t length() const { return end - begin; }
    bool operator==(const SampleSpan&) const = default;
};

/// One pedestrian crossing.  start_sample indexes the fluctuation series of
/// receiver 1; delay_r2 shifts receiver 2's span (negative = R2 fluctuates
/// first, the far-link geometry).
struct CrossingEvent {
    std::int64_t start_sample = 0;
    int group_size = 1;
    std::int64_t delay_r2 = 0;
    std::int64_t duration_r1 = 1;
    std::int64_t duration_r2 = 1;

    bool operator==(const CrossingEvent&) const = default;
};

struct SynthConfig {
    std::size_t n_samples = 4000;
    int baseline_rssi_dbm = -60;
    double quiet_sigma = 0.5;        // fluctuation std with nobody on the path
    double active_sigma_base = 4.0;  // fluctuation std for a single person
    double sigma_per_person = 1.0;   // added per extra person in the group
    std::int64_t duration_base = 12;
    std::int64_t duration_per_person = 8;
    std::int64_t r2_extra_duration = 4;  // far link sees the body longer
    double mean_reversion = 0.9;         // pull of the RSSI walk back to baseline
    int interval_ms = 150;
    std::uint64_t rng_seed = 1;
    std::string receiver1_id = "R1";
    std::string receiver2_id = "R2";
};

struct LabeledEvent {
    CrossingEvent event;
    SampleSpan r1;  // resolved active span on receiver 1's fluctuation series
    SampleSpan r2;

    bool operator==(const LabeledEvent&) const = default;
};

struct GroundTruth {
    std::vector<LabeledEvent> events;  // ordered by r1.begin
    std::size_t n_fluctuations = 0;    // per receiver: n_samples - 1
    std::string receiver1_id = "R1";
    std::string receiver2_id = "R2";

    int head_count() const;
    bool operator==(const GroundTruth&) const = default;
};

struct SynthResult {
    Trace trace;
    GroundTruth truth;
};

/// Generate a two-receiver trace.  Each receiver's RSSI is an integer-valued
/// mean-reverting walk around the baseline whose per-step noise scale is
/// quiet_sigma outside events and active_sigma_base +
/// sigma_per_person*(group_size-1) inside, so the fluctuation std of each
/// region is controlled directly.  Deterministic for a fixed rng_seed.
/// Throws ConfigError on overlapping events, spans outside the trace,
/// group_size outside [1,5], or inconsistent sigma settings.
SynthResult generate_trace(const SynthConfig& config, const std::vector<CrossingEvent>& events);

/// Evenly spaced scenario: one crossing per entry of group_sizes, starting
/// at first_start, spacing samples apart.  Durations follow the config's
/// duration law; delay_r2 centers the longer far-link span on the near one.
std::vector<CrossingEvent> make_scenario(const SynthConfig& config,
                                         const std::vector<int>& group_sizes,
                                         std::int64_t first_start = 50,
                                         std::int64_t spacing = 100);

/// Scenario CSV: header `start_sample,group_size,delay_r2,duration_r1,duration_r2`.
std::vector<CrossingEvent> parse_scenario(std::string_view text);
std::string serialize_scenario(const std::vector<CrossingEvent>& events);
std::vector<CrossingEvent> read_scenario(const std::filesystem::path& path);
void write_scenario(const std::vector<CrossingEvent>& events, const std::filesystem::path& path);

/// Ground-truth CSV: scenario columns plus the resolved per-receiver spans,
/// with `# n_fluctuations=`, `# receiver1=`, `# receiver2=` metadata.
std::string serialize_ground_truth(const GroundTruth& truth);
GroundTruth parse_ground_truth(std::string_view text);
GroundTruth read_ground_truth(const std::filesystem::path& path);
void write_ground_truth(const GroundTruth& truth, const std::filesystem::path& path);

}  // namespace rfcount
