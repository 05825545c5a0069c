#include "rfcount/detect.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "rfcount/errors.hpp"
#include "rfcount/stats_math.hpp"
#include "text_util.hpp"

namespace rfcount {

namespace {

constexpr std::string_view kDecisionHeader = "index,mean,std,prob,decision";
constexpr std::string_view kEventHeader = "receiver_id,start_index,end_index,method";
constexpr std::string_view kPairHeader = "receiver_a,start_a,end_a,receiver_b,start_b,end_b";

// Shared CSV row scanner: strips comments/blank lines, skips one optional
// header, hands every data row to `row` with its 1-based line number.
template <typename RowFn>
bool scan_rows(std::string_view text, std::string_view header, RowFn&& row) {
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
        if (!saw_any && !saw_header && line == header) {
            saw_header = true;
            continue;
        }
        row(line, line_no);
        saw_any = true;
    }
    return saw_any || saw_header;
}

[[noreturn]] void row_fail(std::size_t line, const std::string& what) {
    throw ParseError(what, line);
}

std::vector<std::string_view> split_exact(std::string_view line, std::size_t count,
                                          std::size_t line_no) {
    auto fields = text::split(line, ',');
    if (fields.size() != count)
        row_fail(line_no, "expected " + text::format_uint(count) + " fields, got " +
                              text::format_uint(fields.size()));
    return fields;
}

template <typename T>
T parse_field(std::string_view field, const char* name, std::size_t line_no) {
    auto v = text::parse_number<T>(field);
    if (!v)
        row_fail(line_no, std::string("invalid ") + name + " field '" +
                              std::string(text::trim(field)) + "'");
    return *v;
}

}  // namespace

std::string_view to_string(DetectorMethod method) {
    return method == DetectorMethod::probability ? "prob" : "std";
}

DetectorMethod detector_method_from_string(std::string_view name) {
    if (name == "prob" || name == "probability") return DetectorMethod::probability;
    if (name == "std" || name == "std-threshold") return DetectorMethod::std_threshold;
    throw ConfigError("unknown detector method: " + std::string(name));
}

FluctuationSeries fluctuations(const ReceiverStream& stream) {
    if (stream.samples.size() < 2)
        throw InsufficientDataError("receiver " + stream.receiver_id +
                                    ": insufficient data, need at least 2 samples to compute "
                                    "fluctuations");
    FluctuationSeries f;
    f.aligned_to = stream.receiver_id;
    f.values.reserve(stream.samples.size() - 1);
    for (std::size_t i = 1; i < stream.samples.size(); ++i)
        f.values.push_back(static_cast<double>(stream.samples[i].rssi_dbm) -
                           static_cast<double>(stream.samples[i - 1].rssi_dbm));
    return f;
}

std::vector<WindowStats> window_stats(const FluctuationSeries& f, std::size_t n) {
    if (n < 2) throw ConfigError("window size must be at least 2");
    const std::vector<double>& v = f.values;
    if (v.size() < n)
        throw InsufficientDataError("insufficient data: fluctuation series of length " +
                                    text::format_uint(v.size()) + " is shorter than window " +
                                    text::format_uint(n));

    std::vector<WindowStats> out;
    out.reserve(v.size() - n + 1);
    double sum = 0.0;
    double sumsq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sum += v[i];
        sumsq += v[i] * v[i];
    }
    std::size_t since_refresh = 0;
    for (std::size_t i = n - 1;; ++i) {
        double mean = sum / static_cast<double>(n);
        double var = (sumsq - sum * mean) / static_cast<double>(n - 1);
        double sd = var > 0.0 ? std::sqrt(var) : 0.0;
        out.push_back({i, mean, sd, prob_in_band(mean, sd)});
        if (i + 1 == v.size()) break;
        sum += v[i + 1] - v[i + 1 - n];
        sumsq += v[i + 1] * v[i + 1] - v[i + 1 - n] * v[i + 1 - n];
        if (++since_refresh == 4096) {  // bound drift of the running sums
            sum = sumsq = 0.0;
            for (std::size_t k = i + 2 - n; k <= i + 1; ++k) {
                sum += v[k];
                sumsq += v[k] * v[k];
            }
            since_refresh = 0;
        }
    }
    return out;
}

double prob_in_band(double mean, double std) {
    return normal_band_probability(mean, std, -1.0, 1.0);
}

std::vector<bool> detect_probability(const std::vector<WindowStats>& stats, double threshold) {
    std::vector<bool> out(stats.size());
    for (std::size_t i = 0; i < stats.size(); ++i) out[i] = stats[i].prob_in_band < threshold;
    return out;
}

std::vector<bool> detect_std(const std::vector<WindowStats>& stats, double threshold) {
    std::vector<bool> out(stats.size());
    for (std::size_t i = 0; i < stats.size(); ++i) out[i] = stats[i].std > threshold;
    return out;
}

std::vector<bool> detect(const std::vector<WindowStats>& stats, DetectorMethod method,
                         double prob_threshold, double std_threshold) {
    return method == DetectorMethod::probability ? detect_probability(stats, prob_threshold)
                                                 : detect_std(stats, std_threshold);
}

std::vector<IndexRun> segment_runs(const std::vector<bool>& decisions, std::size_t min_duration,
                                   std::size_t merge_gap) {
    std::vector<IndexRun> merged;
    std::size_t i = 0;
    while (i < decisions.size()) {
        if (!decisions[i]) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < decisions.size() && decisions[j + 1]) ++j;
        if (!merged.empty() && i - merged.back().end - 1 <= merge_gap)
            merged.back().end = j;
        else
            merged.push_back({i, j});
        i = j + 1;
    }

    std::vector<IndexRun> out;
    out.reserve(merged.size());
    for (const IndexRun& r : merged)
        if (r.length() >= std::max<std::size_t>(min_duration, 1)) out.push_back(r);
    return out;
}

std::vector<DetectionEvent> segment_events(const std::vector<WindowStats>& stats,
                                           const std::vector<bool>& decisions,
                                           DetectorMethod method, std::string receiver_id,
                                           std::size_t min_duration, std::size_t merge_gap) {
    if (stats.size() != decisions.size())
        throw DimensionError("decision vector does not match window stats length");
    std::vector<DetectionEvent> events;
    for (const IndexRun& r : segment_runs(decisions, min_duration, merge_gap)) {
        DetectionEvent ev;
        ev.receiver_id = receiver_id;
        ev.start_index = stats[r.begin].index;
        ev.end_index = stats[r.end].index;
        ev.method = method;
        ev.window_stats_slice.assign(stats.begin() + static_cast<std::ptrdiff_t>(r.begin),
                                     stats.begin() + static_cast<std::ptrdiff_t>(r.end) + 1);
        events.push_back(std::move(ev));
    }
    return events;
}

FusionResult fuse_receivers(std::vector<DetectionEvent> events_a,
                            std::vector<DetectionEvent> events_b, std::size_t pairing_window) {
    struct Candidate {
        std::size_t dist;
        std::size_t ia;
        std::size_t ib;
    };
    std::vector<Candidate> candidates;
    for (std::size_t ia = 0; ia < events_a.size(); ++ia) {
        for (std::size_t ib = 0; ib < events_b.size(); ++ib) {
            const DetectionEvent& a = events_a[ia];
            const DetectionEvent& b = events_b[ib];
            bool overlap = a.start_index <= b.end_index && b.start_index <= a.end_index;
            std::size_t dist = a.start_index < b.start_index ? b.start_index - a.start_index
                                                             : a.start_index - b.start_index;
            if (overlap || dist <= pairing_window) candidates.push_back({dist, ia, ib});
        }
    }
    std::sort(candidates.begin(), candidates.end(), [&](const Candidate& x, const Candidate& y) {
        if (x.dist != y.dist) return x.dist < y.dist;
        if (events_a[x.ia].start_index != events_a[y.ia].start_index)
            return events_a[x.ia].start_index < events_a[y.ia].start_index;
        return events_b[x.ib].start_index < events_b[y.ib].start_index;
    });

    std::vector<bool> used_a(events_a.size(), false), used_b(events_b.size(), false);
    FusionResult result;
    for (const Candidate& c : candidates) {
        if (used_a[c.ia] || used_b[c.ib]) continue;
        used_a[c.ia] = used_b[c.ib] = true;
        result.pairs.push_back({events_a[c.ia], events_b[c.ib]});
    }
    std::sort(result.pairs.begin(), result.pairs.end(), [](const PairedEvent& x, const PairedEvent& y) {
        if (x.a.start_index != y.a.start_index) return x.a.start_index < y.a.start_index;
        return x.b.start_index < y.b.start_index;
    });
    for (std::size_t i = 0; i < events_a.size(); ++i)
        if (!used_a[i]) result.discarded_a.push_back(std::move(events_a[i]));
    for (std::size_t i = 0; i < events_b.size(); ++i)
        if (!used_b[i]) result.discarded_b.push_back(std::move(events_b[i]));
    return result;
}

std::vector<SweepResult> window_sweep(const Trace& trace, const GroundTruth& truth,
                                      const std::vector<std::size_t>& n_values,
                                      DetectorMethod method, double prob_threshold,
                                      double std_threshold) {
    struct ReceiverCase {
        FluctuationSeries fluct;
        std::vector<std::size_t> active_prefix;  // active_prefix[i] = #active in [0, i)
    };
    std::vector<ReceiverCase> cases;
    for (bool first : {true, false}) {
        const std::string& id = first ? truth.receiver1_id : truth.receiver2_id;
        ReceiverCase rc;
        rc.fluct = fluctuations(trace.at(id));
        if (rc.fluct.values.size() != truth.n_fluctuations)
            throw DimensionError("ground truth does not match trace length for receiver " + id);
        std::vector<char> mask(truth.n_fluctuations, 0);
        for (const LabeledEvent& le : truth.events) {
            const SampleSpan& span = first ? le.r1 : le.r2;
            for (std::size_t k = span.begin; k < std::min<std::size_t>(span.end, mask.size()); ++k)
                mask[k] = 1;
        }
        rc.active_prefix.assign(mask.size() + 1, 0);
        for (std::size_t i = 0; i < mask.size(); ++i)
            rc.active_prefix[i + 1] = rc.active_prefix[i] + (mask[i] ? 1u : 0u);
        cases.push_back(std::move(rc));
    }

    std::vector<SweepResult> results;
    for (std::size_t n : n_values) {
        SweepResult res;
        res.n = n;
        for (const ReceiverCase& rc : cases) {
            auto stats = window_stats(rc.fluct, n);
            auto decisions = detect(stats, method, prob_threshold, std_threshold);
            for (std::size_t p = 0; p < stats.size(); ++p) {
                std::size_t hi = stats[p].index + 1;
                std::size_t active = rc.active_prefix[hi] - rc.active_prefix[hi - n];
                if (active != 0 && active != n) continue;  // straddles a boundary
                bool expected = active == n;
                ++res.evaluated;
                if (decisions[p] != expected) ++res.errors;
            }
        }
        res.error_rate = res.evaluated == 0
                             ? 0.0
                             : static_cast<double>(res.errors) / static_cast<double>(res.evaluated);
        results.push_back(res);
    }
    return results;
}

std::size_t best_window(const std::vector<SweepResult>& results) {
    if (results.empty()) throw EmptyInputError("window sweep produced no results");
    std::size_t best = 0;
    for (std::size_t i = 1; i < results.size(); ++i)
        if (results[i].error_rate < results[best].error_rate ||
            (results[i].error_rate == results[best].error_rate && results[i].n < results[best].n))
            best = i;
    return results[best].n;
}

std::string serialize_decisions(const std::vector<WindowStats>& stats,
                                const std::vector<bool>& decisions) {
    if (stats.size() != decisions.size())
        throw DimensionError("decision vector does not match window stats length");
    std::string out(kDecisionHeader);
    out += '\n';
    for (std::size_t i = 0; i < stats.size(); ++i) {
        out += text::format_uint(stats[i].index);
        out += ',';
        out += text::format_double(stats[i].mean);
        out += ',';
        out += text::format_double(stats[i].std);
        out += ',';
        out += text::format_double(stats[i].prob_in_band);
        out += ',';
        out += decisions[i] ? '1' : '0';
        out += '\n';
    }
    return out;
}

DecisionSeries parse_decisions(std::string_view text) {
    DecisionSeries series;
    bool any = scan_rows(text, kDecisionHeader, [&](std::string_view line, std::size_t line_no) {
        auto f = split_exact(line, 5, line_no);
        WindowStats ws;
        ws.index = parse_field<std::uint64_t>(f[0], "index", line_no);
        ws.mean = parse_field<double>(f[1], "mean", line_no);
        ws.std = parse_field<double>(f[2], "std", line_no);
        ws.prob_in_band = parse_field<double>(f[3], "prob", line_no);
        auto decision = parse_field<int>(f[4], "decision", line_no);
        if (decision != 0 && decision != 1) row_fail(line_no, "decision must be 0 or 1");
        series.stats.push_back(ws);
        series.decisions.push_back(decision == 1);
    });
    if (!any) throw EmptyInputError("decision file is empty");
    return series;
}

std::string serialize_events(const std::vector<DetectionEvent>& events) {
    std::string out(kEventHeader);
    out += '\n';
    for (const DetectionEvent& ev : events) {
        out += ev.receiver_id;
        out += ',';
        out += text::format_uint(ev.start_index);
        out += ',';
        out += text::format_uint(ev.end_index);
        out += ',';
        out += to_string(ev.method);
        out += '\n';
    }
    return out;
}

std::vector<DetectionEvent> parse_events(std::string_view text) {
    std::vector<DetectionEvent> events;
    bool any = scan_rows(text, kEventHeader, [&](std::string_view line, std::size_t line_no) {
        auto f = split_exact(line, 4, line_no);
        DetectionEvent ev;
        ev.receiver_id = std::string(text::trim(f[0]));
        if (ev.receiver_id.empty()) row_fail(line_no, "empty receiver_id");
        ev.start_index = parse_field<std::uint64_t>(f[1], "start_index", line_no);
        ev.end_index = parse_field<std::uint64_t>(f[2], "end_index", line_no);
        if (ev.end_index < ev.start_index) row_fail(line_no, "end_index before start_index");
        std::string_view method = text::trim(f[3]);
        if (method == "prob")
            ev.method = DetectorMethod::probability;
        else if (method == "std")
            ev.method = DetectorMethod::std_threshold;
        else
            row_fail(line_no, "unknown method '" + std::string(method) + "'");
        events.push_back(std::move(ev));
    });
    if (!any) throw EmptyInputError("event file is empty");
    return events;
}

void attach_stats_slice(DetectionEvent& event, const std::vector<WindowStats>& stats) {
    auto lo = std::lower_bound(stats.begin(), stats.end(), event.start_index,
                               [](const WindowStats& ws, std::size_t idx) { return ws.index < idx; });
    std::vector<WindowStats> slice;
    for (auto it = lo; it != stats.end() && it->index <= event.end_index; ++it)
        slice.push_back(*it);
    if (slice.size() != event.duration())
        throw DimensionError("window stats do not cover event [" +
                             text::format_uint(event.start_index) + ", " +
                             text::format_uint(event.end_index) + "] on " + event.receiver_id);
    event.window_stats_slice = std::move(slice);
}

std::string serialize_pairs(const std::vector<PairedEvent>& pairs) {
    std::string out(kPairHeader);
    out += '\n';
    for (const PairedEvent& p : pairs) {
        out += p.a.receiver_id;
        out += ',';
        out += text::format_uint(p.a.start_index);
        out += ',';
        out += text::format_uint(p.a.end_index);
        out += ',';
        out += p.b.receiver_id;
        out += ',';
        out += text::format_uint(p.b.start_index);
        out += ',';
        out += text::format_uint(p.b.end_index);
        out += '\n';
    }
    return out;
}

std::vector<PairedEvent> parse_pairs(std::string_view text) {
    std::vector<PairedEvent> pairs;
    bool any = scan_rows(text, kPairHeader, [&](std::string_view line, std::size_t line_no) {
        auto f = split_exact(line, 6, line_no);
        PairedEvent p;
        p.a.receiver_id = std::string(text::trim(f[0]));
        p.a.start_index = parse_field<std::uint64_t>(f[1], "start_a", line_no);
        p.a.end_index = parse_field<std::uint64_t>(f[2], "end_a", line_no);
        p.b.receiver_id = std::string(text::trim(f[3]));
        p.b.start_index = parse_field<std::uint64_t>(f[4], "start_b", line_no);
        p.b.end_index = parse_field<std::uint64_t>(f[5], "end_b", line_no);
        if (p.a.receiver_id.empty() || p.b.receiver_id.empty())
            row_fail(line_no, "empty receiver id");
        if (p.a.end_index < p.a.start_index || p.b.end_index < p.b.start_index)
            row_fail(line_no, "end index before start index");
        pairs.push_back(std::move(p));
    });
    if (!any) throw EmptyInputError("pair file is empty");
    return pairs;
}

}  // namespace rfcount
