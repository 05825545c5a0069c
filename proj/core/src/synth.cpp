#include "rfcount/synth.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "rfcount/errors.hpp"
#include "rfcount/rng.hpp"
#include "text_util.hpp"

namespace rfcount {

namespace {

constexpr std::string_view kScenarioHeader = "start_sample,group_size,delay_r2,duration_r1,duration_r2";

void validate_config(const SynthConfig& c) {
    if (c.n_samples < 2) throw ConfigError("n_samples must be at least 2");
    if (c.baseline_rssi_dbm < -127 || c.baseline_rssi_dbm > 0)
        throw ConfigError("baseline_rssi_dbm outside [-127, 0]");
    if (c.quiet_sigma < 0.0) throw ConfigError("quiet_sigma must be non-negative");
    if (!(c.quiet_sigma < 2.0 && 2.0 < c.active_sigma_base))
        throw ConfigError("need quiet_sigma < 2 < active_sigma_base");
    if (c.sigma_per_person < 0.0) throw ConfigError("sigma_per_person must be non-negative");
    if (!(c.mean_reversion >= 0.0 && c.mean_reversion < 1.0))
        throw ConfigError("mean_reversion must lie in [0, 1)");
    if (c.interval_ms <= 0) throw ConfigError("interval_ms must be positive");
    if (c.receiver1_id.empty() || c.receiver2_id.empty() || c.receiver1_id == c.receiver2_id)
        throw ConfigError("receiver ids must be non-empty and distinct");
}

SampleSpan resolve_span(std::int64_t begin, std::int64_t duration, std::size_t n_fluct) {
    if (begin < 0) throw ConfigError("event span extends before trace start");
    std::int64_t end = begin + duration;
    if (end > static_cast<std::int64_t>(n_fluct))
        throw ConfigError("event span exceeds trace length");
    return {static_cast<std::size_t>(begin), static_cast<std::size_t>(end)};
}

void check_disjoint(std::vector<SampleSpan> spans, const char* receiver) {
    std::sort(spans.begin(), spans.end(),
              [](const SampleSpan& a, const SampleSpan& b) { return a.begin < b.begin; });
    for (std::size_t i = 1; i < spans.size(); ++i) {
        if (spans[i].begin < spans[i - 1].end)
            throw ConfigError(std::string("overlapping events on ") + receiver);
    }
}

std::vector<PacketSample> synth_stream(const SynthConfig& c, const std::string& receiver_id,
                                       const std::vector<double>& step_sigma,
                                       std::uint64_t stream_index) {
    rng::Gaussian gauss(rng::derive_seed(c.rng_seed, stream_index));
    // Noise scale chosen so the stationary std of the *steps* of the
    // mean-reverting walk equals the requested region sigma.
    double a = c.mean_reversion;
    double scale = std::sqrt((1.0 + a) / 2.0);

    std::vector<PacketSample> samples;
    samples.reserve(c.n_samples);
    int rssi = c.baseline_rssi_dbm;
    samples.push_back({receiver_id, 0, 0, rssi});
    for (std::size_t i = 1; i < c.n_samples; ++i) {
        double pull = (a - 1.0) * static_cast<double>(rssi - c.baseline_rssi_dbm);
        double noise = gauss.next(0.0, step_sigma[i - 1] * scale);
        auto step = static_cast<int>(std::llround(pull + noise));
        rssi = std::clamp(rssi + step, -127, 0);
        samples.push_back({receiver_id, i, i * static_cast<std::uint64_t>(c.interval_ms), rssi});
    }
    return samples;
}

}  // namespace

int GroundTruth::head_count() const {
    int total = 0;
    for (const auto& e : events) total += e.event.group_size;
    return total;
}

SynthResult generate_trace(const SynthConfig& config, const std::vector<CrossingEvent>& events) {
    validate_config(config);
    std::size_t n_fluct = config.n_samples - 1;

    GroundTruth truth;
    truth.n_fluctuations = n_fluct;
    truth.receiver1_id = config.receiver1_id;
    truth.receiver2_id = config.receiver2_id;
    truth.events.reserve(events.size());
    for (const CrossingEvent& ev : events) {
        if (ev.group_size < 1 || ev.group_size > 5)
            throw ConfigError("group_size outside [1, 5]: " + text::format_int(ev.group_size));
        if (ev.duration_r1 < 1 || ev.duration_r2 < 1)
            throw ConfigError("event durations must be positive");
        if (ev.group_size > 1 && ev.duration_r2 < ev.duration_r1)
            throw ConfigError("far-link duration_r2 must be >= duration_r1 for groups");
        LabeledEvent le;
        le.event = ev;
        le.r1 = resolve_span(ev.start_sample, ev.duration_r1, n_fluct);
        le.r2 = resolve_span(ev.start_sample + ev.delay_r2, ev.duration_r2, n_fluct);
        truth.events.push_back(std::move(le));
    }
    std::sort(truth.events.begin(), truth.events.end(),
              [](const LabeledEvent& a, const LabeledEvent& b) { return a.r1.begin < b.r1.begin; });

    std::vector<SampleSpan> spans1, spans2;
    for (const auto& le : truth.events) {
        spans1.push_back(le.r1);
        spans2.push_back(le.r2);
    }
    check_disjoint(std::move(spans1), "receiver 1");
    check_disjoint(std::move(spans2), "receiver 2");

    std::vector<double> sigma1(n_fluct, config.quiet_sigma);
    std::vector<double> sigma2(n_fluct, config.quiet_sigma);
    for (const auto& le : truth.events) {
        double sigma = config.active_sigma_base + config.sigma_per_person * (le.event.group_size - 1);
        std::fill(sigma1.begin() + le.r1.begin, sigma1.begin() + le.r1.end, sigma);
        std::fill(sigma2.begin() + le.r2.begin, sigma2.begin() + le.r2.end, sigma);
    }

    std::vector<ReceiverStream> streams;
    streams.push_back({config.receiver1_id, synth_stream(config, config.receiver1_id, sigma1, 0)});
    streams.push_back({config.receiver2_id, synth_stream(config, config.receiver2_id, sigma2, 1)});
    return {Trace(std::move(streams), config.interval_ms), std::move(truth)};
}

std::vector<CrossingEvent> make_scenario(const SynthConfig& config,
                                         const std::vector<int>& group_sizes,
                                         std::int64_t first_start, std::int64_t spacing) {
    if (first_start < 0) throw ConfigError("first_start must be non-negative");
    if (spacing < 1) throw ConfigError("spacing must be positive");
    std::vector<CrossingEvent> events;
    events.reserve(group_sizes.size());
    std::int64_t start = first_start;
    for (int g : group_sizes) {
        if (g < 1 || g > 5) throw ConfigError("group_size outside [1, 5]: " + text::format_int(g));
        CrossingEvent ev;
        ev.start_sample = start;
        ev.group_size = g;
        ev.duration_r1 = config.duration_base + config.duration_per_person * (g - 1);
        ev.duration_r2 = ev.duration_r1 + config.r2_extra_duration;
        ev.delay_r2 = -((ev.duration_r2 - ev.duration_r1) / 2);
        events.push_back(ev);
        start += spacing;
    }
    return events;
}

std::vector<CrossingEvent> parse_scenario(std::string_view text) {
    std::vector<CrossingEvent> events;
    bool saw_any = false;
    bool saw_header = false;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string_view raw = (eol == std::string_view::npos) ? text.substr(pos)
                                                               : text.substr(pos, eol - pos);
        pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
        ++line_no;

        std::string_view line = text::trim(text::strip_cr(raw));
        if (line.empty()) {
            if (eol == std::string_view::npos) break;
            continue;
        }
        if (line.front() == '#') {
            if (saw_any || saw_header)
                throw ParseError("comment line after data",
                                 line_no);
            continue;
        }
        if (!saw_any && !saw_header && line == kScenarioHeader) {
            saw_header = true;
            continue;
        }

        auto fields = text::split(line, ',');
        if (fields.size() != 5)
            throw ParseError("expected 5 fields, got " +
                                 text::format_uint(fields.size()),
                             line_no);
        auto field = [&](std::size_t k, const char* name) {
            auto v = text::parse_number<std::int64_t>(fields[k]);
            if (!v)
                throw ParseError("invalid " + std::string(name) + " field '" +
                                     std::string(text::trim(fields[k])) + "'",
                                 line_no);
            return *v;
        };
        CrossingEvent ev;
        ev.start_sample = field(0, "start_sample");
        ev.group_size = static_cast<int>(field(1, "group_size"));
        ev.delay_r2 = field(2, "delay_r2");
        ev.duration_r1 = field(3, "duration_r1");
        ev.duration_r2 = field(4, "duration_r2");
        events.push_back(ev);
        saw_any = true;
    }

    if (!saw_any && !saw_header) throw EmptyInputError("scenario file is empty");
    return events;
}

std::string serialize_scenario(const std::vector<CrossingEvent>& events) {
    std::string out(kScenarioHeader);
    out += '\n';
    for (const auto& ev : events) {
        out += text::format_int(ev.start_sample);
        out += ',';
        out += text::format_int(ev.group_size);
        out += ',';
        out += text::format_int(ev.delay_r2);
        out += ',';
        out += text::format_int(ev.duration_r1);
        out += ',';
        out += text::format_int(ev.duration_r2);
        out += '\n';
    }
    return out;
}

std::vector<CrossingEvent> read_scenario(const std::filesystem::path& path) {
    return parse_scenario(read_text_file(path));
}

void write_scenario(const std::vector<CrossingEvent>& events, const std::filesystem::path& path) {
    write_text_file(path, serialize_scenario(events));
}

namespace {
constexpr std::string_view kTruthHeader =
    "start_sample,group_size,delay_r2,duration_r1,duration_r2,r1_begin,r1_end,r2_begin,r2_end";
}  // namespace

std::string serialize_ground_truth(const GroundTruth& truth) {
    std::string out;
    out += "# n_fluctuations=" + text::format_uint(truth.n_fluctuations) + '\n';
    out += "# receiver1=" + truth.receiver1_id + '\n';
    out += "# receiver2=" + truth.receiver2_id + '\n';
    out += kTruthHeader;
    out += '\n';
    for (const LabeledEvent& le : truth.events) {
        out += text::format_int(le.event.start_sample);
        out += ',';
        out += text::format_int(le.event.group_size);
        out += ',';
        out += text::format_int(le.event.delay_r2);
        out += ',';
        out += text::format_int(le.event.duration_r1);
        out += ',';
        out += text::format_int(le.event.duration_r2);
        out += ',';
        out += text::format_uint(le.r1.begin);
        out += ',';
        out += text::format_uint(le.r1.end);
        out += ',';
        out += text::format_uint(le.r2.begin);
        out += ',';
        out += text::format_uint(le.r2.end);
        out += '\n';
    }
    return out;
}

GroundTruth parse_ground_truth(std::string_view text) {
    GroundTruth truth;
    bool saw_n = false;
    bool saw_any = false;
    bool saw_header = false;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string_view raw = (eol == std::string_view::npos) ? text.substr(pos)
                                                               : text.substr(pos, eol - pos);
        pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
        ++line_no;

        std::string_view line = text::trim(text::strip_cr(raw));
        if (line.empty()) {
            if (eol == std::string_view::npos) break;
            continue;
        }
        auto fail = [&](const std::string& what) -> void {
            throw ParseError(what, line_no);
        };
        if (line.front() == '#') {
            if (saw_any || saw_header) fail("comment line after data");
            std::string_view body = text::trim(line.substr(1));
            std::size_t eq = body.find('=');
            if (eq == std::string_view::npos) continue;
            std::string_view key = text::trim(body.substr(0, eq));
            std::string_view value = text::trim(body.substr(eq + 1));
            if (key == "n_fluctuations") {
                auto v = text::parse_number<std::uint64_t>(value);
                if (!v) fail("invalid n_fluctuations value");
                truth.n_fluctuations = *v;
                saw_n = true;
            } else if (key == "receiver1") {
                truth.receiver1_id = std::string(value);
            } else if (key == "receiver2") {
                truth.receiver2_id = std::string(value);
            }
            continue;
        }
        if (!saw_any && !saw_header && line == kTruthHeader) {
            saw_header = true;
            continue;
        }

        auto fields = text::split(line, ',');
        if (fields.size() != 9)
            fail("expected 9 fields, got " + text::format_uint(fields.size()));
        auto field = [&](std::size_t k, const char* name) {
            auto v = text::parse_number<std::int64_t>(fields[k]);
            if (!v)
                fail(std::string("invalid ") + name + " field '" +
                     std::string(text::trim(fields[k])) + "'");
            return *v;
        };
        LabeledEvent le;
        le.event.start_sample = field(0, "start_sample");
        le.event.group_size = static_cast<int>(field(1, "group_size"));
        le.event.delay_r2 = field(2, "delay_r2");
        le.event.duration_r1 = field(3, "duration_r1");
        le.event.duration_r2 = field(4, "duration_r2");
        auto span_field = [&](std::size_t k, const char* name) {
            std::int64_t v = field(k, name);
            if (v < 0) fail(std::string(name) + " must be non-negative");
            return static_cast<std::size_t>(v);
        };
        le.r1 = {span_field(5, "r1_begin"), span_field(6, "r1_end")};
        le.r2 = {span_field(7, "r2_begin"), span_field(8, "r2_end")};
        if (le.r1.end < le.r1.begin || le.r2.end < le.r2.begin) fail("span end before begin");
        truth.events.push_back(std::move(le));
        saw_any = true;
    }

    if (!saw_any && !saw_header) throw EmptyInputError("ground truth file is empty");
    if (!saw_n) throw ParseError("missing n_fluctuations metadata", 0);
    return truth;
}

GroundTruth read_ground_truth(const std::filesystem::path& path) {
    return parse_ground_truth(read_text_file(path));
}

void write_ground_truth(const GroundTruth& truth, const std::filesystem::path& path) {
    write_text_file(path, serialize_ground_truth(truth));
}

}  // namespace rfcount
