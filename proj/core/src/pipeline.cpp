#include "rfcount/pipeline.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "json.hpp"
#include "rfcount/errors.hpp"
#include "text_util.hpp"

namespace rfcount {

namespace {

using nlohmann::json;

std::vector<DetectionEvent> detect_events(const Trace& trace, const std::string& receiver_id,
                                          const DetectorConfig& cfg) {
    FluctuationSeries f = fluctuations(trace.at(receiver_id));
    auto stats = window_stats(f, cfg.window);
    auto decisions = detect(stats, cfg.method, cfg.prob_threshold, cfg.std_threshold);
    return segment_events(stats, decisions, cfg.method, receiver_id, cfg.min_duration,
                          cfg.merge_gap);
}

PairReport count_pair(const Trace& trace, const std::string& near_id, const std::string& far_id,
                      const lda::Model& model, const CountConfig& config) {
    PairReport report;
    report.receiver_a = near_id;
    report.receiver_b = far_id;
    report.model_resubstitution_accuracy = model.resubstitution_accuracy;

    FusionResult fused = fuse_receivers(detect_events(trace, near_id, config.detector),
                                        detect_events(trace, far_id, config.detector),
                                        config.detector.pairing_window);
    report.discarded_a = fused.discarded_a.size();
    report.discarded_b = fused.discarded_b.size();

    for (PairedEvent& pair : fused.pairs) {
        CountedEvent ev;
        ev.features = extract_features(pair);
        ev.predicted_group = lda::classify(model, ev.features);
        ev.period = config.period_samples ? pair.a.start_index / *config.period_samples : 0;
        ev.pair = std::move(pair);
        report.events.push_back(std::move(ev));
        report.predicted_head_count += report.events.back().predicted_group;
    }
    return report;
}

}  // namespace

ConfusionMatrix ConfusionMatrix::zero(std::vector<int> labels) {
    ConfusionMatrix m;
    m.labels = std::move(labels);
    m.counts.assign(m.labels.size() + 1, std::vector<int>(m.labels.size() + 1, 0));
    return m;
}

int ConfusionMatrix::total() const {
    int t = 0;
    for (const auto& row : counts)
        for (int c : row) t += c;
    return t;
}

int ConfusionMatrix::diagonal() const {
    int t = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) t += counts[i][i];
    return t;
}

double ConfusionMatrix::group_accuracy() const {
    int t = total();
    return t == 0 ? 0.0 : static_cast<double>(diagonal()) / static_cast<double>(t);
}

double head_count_accuracy(int predicted, int actual) {
    if (predicted < 0 || actual < 0) throw DomainError("head counts must be non-negative");
    if (predicted == 0 && actual == 0) return 1.0;
    int lo = std::min(predicted, actual);
    int hi = std::max(predicted, actual);
    return static_cast<double>(lo) / static_cast<double>(hi);
}

CountReport run_count(const Trace& trace, const lda::Model& model, const CountConfig& config) {
    return run_count(trace, std::vector<const lda::Model*>{&model}, config);
}

CountReport run_count(const Trace& trace, const std::vector<const lda::Model*>& models,
                      const CountConfig& config) {
    std::vector<std::string> receivers = config.receivers;
    if (receivers.empty())
        for (const ReceiverStream& s : trace.receivers()) receivers.push_back(s.receiver_id);
    for (const std::string& id : receivers) trace.at(id);  // missing -> ConfigError

    if (receivers.size() < 2) throw ConfigError("counting requires at least 2 receivers");
    if (receivers.size() > 3) throw ConfigError("at most 3 receivers are supported");
    if (models.empty() || std::any_of(models.begin(), models.end(),
                                      [](const lda::Model* m) { return m == nullptr; }))
        throw ConfigError("no model supplied");
    if (config.period_samples && *config.period_samples == 0)
        throw ConfigError("period_samples must be positive");

    std::vector<std::pair<std::string, std::string>> link_pairs;
    if (receivers.size() == 2) {
        link_pairs.emplace_back(receivers[0], receivers[1]);
    } else {
        // Two one-Tx/two-Rx zones in symmetry, sharing the middle receiver.
        link_pairs.emplace_back(receivers[0], receivers[1]);
        link_pairs.emplace_back(receivers[2], receivers[1]);
    }
    if (models.size() != 1 && models.size() != link_pairs.size())
        throw ConfigError("model count must be 1 or match the pair count");

    CountReport report;
    for (std::size_t i = 0; i < link_pairs.size(); ++i) {
        const lda::Model& model = models.size() == 1 ? *models[0] : *models[i];
        report.pairs.push_back(
            count_pair(trace, link_pairs[i].first, link_pairs[i].second, model, config));
    }
    report.combined_index = 0;
    for (std::size_t i = 1; i < report.pairs.size(); ++i)
        if (report.pairs[i].model_resubstitution_accuracy >
            report.pairs[report.combined_index].model_resubstitution_accuracy)
            report.combined_index = i;
    return report;
}

std::vector<std::pair<std::size_t, std::size_t>> match_spans(const std::vector<SampleSpan>& a,
                                                             const std::vector<SampleSpan>& b) {
    struct Candidate {
        std::size_t overlap;
        std::size_t ia;
        std::size_t ib;
    };
    std::vector<Candidate> candidates;
    for (std::size_t ia = 0; ia < a.size(); ++ia) {
        for (std::size_t ib = 0; ib < b.size(); ++ib) {
            std::size_t lo = std::max(a[ia].begin, b[ib].begin);
            std::size_t hi = std::min(a[ia].end, b[ib].end);
            if (hi > lo) candidates.push_back({hi - lo, ia, ib});
        }
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& x, const Candidate& y) {
        if (x.overlap != y.overlap) return x.overlap > y.overlap;
        if (x.ia != y.ia) return x.ia < y.ia;
        return x.ib < y.ib;
    });
    std::vector<bool> used_a(a.size(), false), used_b(b.size(), false);
    std::vector<std::pair<std::size_t, std::size_t>> matches;
    for (const Candidate& c : candidates) {
        if (used_a[c.ia] || used_b[c.ib]) continue;
        used_a[c.ia] = used_b[c.ib] = true;
        matches.emplace_back(c.ia, c.ib);
    }
    std::sort(matches.begin(), matches.end());
    return matches;
}

EvalMetrics evaluate_spans(const std::vector<LabeledSpan>& predicted,
                           const std::vector<LabeledSpan>& actual) {
    std::set<int> label_set;
    for (const LabeledSpan& s : predicted) label_set.insert(s.label);
    for (const LabeledSpan& s : actual) label_set.insert(s.label);

    EvalMetrics metrics;
    metrics.confusion =
        ConfusionMatrix::zero(std::vector<int>(label_set.begin(), label_set.end()));
    auto index_of = [&](int label) {
        return static_cast<std::size_t>(
            std::lower_bound(metrics.confusion.labels.begin(), metrics.confusion.labels.end(),
                             label) -
            metrics.confusion.labels.begin());
    };
    std::size_t miss = metrics.confusion.labels.size();

    std::vector<SampleSpan> pred_spans, actual_spans;
    for (const LabeledSpan& s : predicted) pred_spans.push_back(s.span);
    for (const LabeledSpan& s : actual) actual_spans.push_back(s.span);

    std::vector<bool> pred_used(predicted.size(), false), actual_used(actual.size(), false);
    for (auto [ip, ia] : match_spans(pred_spans, actual_spans)) {
        pred_used[ip] = actual_used[ia] = true;
        metrics.confusion.counts[index_of(actual[ia].label)][index_of(predicted[ip].label)] += 1;
        ++metrics.matched;
    }
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        metrics.predicted_head_count += predicted[i].label;
        if (!pred_used[i]) {
            metrics.confusion.counts[miss][index_of(predicted[i].label)] += 1;
            ++metrics.unmatched_predicted;
        }
    }
    for (std::size_t i = 0; i < actual.size(); ++i) {
        metrics.actual_head_count += actual[i].label;
        if (!actual_used[i]) {
            metrics.confusion.counts[index_of(actual[i].label)][miss] += 1;
            ++metrics.unmatched_actual;
        }
    }
    metrics.group_accuracy = metrics.confusion.group_accuracy();
    metrics.head_count_accuracy =
        head_count_accuracy(metrics.predicted_head_count, metrics.actual_head_count);
    return metrics;
}

EvalMetrics evaluate(const PairReport& report, const GroundTruth& truth) {
    std::vector<LabeledSpan> predicted;
    for (const CountedEvent& ev : report.events)
        predicted.push_back(
            {{ev.pair.a.start_index, ev.pair.a.end_index + 1}, ev.predicted_group});
    std::vector<LabeledSpan> actual;
    for (const LabeledEvent& le : truth.events) actual.push_back({le.r1, le.event.group_size});
    return evaluate_spans(predicted, actual);
}

void label_features(std::vector<EventFeatureVector>& features,
                    const std::vector<PairedEvent>& pairs, const GroundTruth& truth) {
    if (features.size() != pairs.size())
        throw DimensionError("feature count does not match pair count");
    std::vector<SampleSpan> pred_spans;
    for (const PairedEvent& p : pairs)
        pred_spans.push_back({p.a.start_index, p.a.end_index + 1});
    std::vector<SampleSpan> truth_spans;
    for (const LabeledEvent& le : truth.events) truth_spans.push_back(le.r1);
    for (auto [ip, it] : match_spans(pred_spans, truth_spans))
        features[ip].label = truth.events[it].event.group_size;
}

void evaluate_report(CountReport& report, const GroundTruth& truth) {
    if (report.pairs.empty()) throw EmptyInputError("report has no pairs");
    report.eval = evaluate(report.pairs[report.combined_index], truth);
}

std::string format_report_text(const CountReport& report) {
    std::string out;
    for (std::size_t i = 0; i < report.pairs.size(); ++i) {
        const PairReport& pair = report.pairs[i];
        out += "pair " + pair.receiver_a + "-" + pair.receiver_b;
        if (report.pairs.size() > 1 && i == report.combined_index) out += " [combined]";
        out += "\n";
        out += "  events: " + text::format_uint(pair.events.size()) +
               "  head count: " + text::format_int(pair.predicted_head_count) +
               "  discarded: " + text::format_uint(pair.discarded_a) + "+" +
               text::format_uint(pair.discarded_b) + "\n";
        for (const CountedEvent& ev : pair.events) {
            out += "  [" + text::format_uint(ev.pair.a.start_index) + ", " +
                   text::format_uint(ev.pair.a.end_index) + "] x [" +
                   text::format_uint(ev.pair.b.start_index) + ", " +
                   text::format_uint(ev.pair.b.end_index) +
                   "] group " + text::format_int(ev.predicted_group) + "\n";
        }
        std::map<std::size_t, int> by_period;
        for (const CountedEvent& ev : pair.events) by_period[ev.period] += ev.predicted_group;
        if (by_period.size() > 1 || (!by_period.empty() && by_period.begin()->first != 0)) {
            out += "  per-period head counts:";
            for (const auto& [period, count] : by_period)
                out += " p" + text::format_uint(period) + "=" + text::format_int(count);
            out += "\n";
        }
    }
    if (report.eval) {
        const EvalMetrics& ev = *report.eval;
        out += "evaluation\n";
        out += "  group accuracy: " + text::format_double(ev.group_accuracy) +
               "  head-count accuracy: " + text::format_double(ev.head_count_accuracy) + "\n";
        out += "  predicted head count: " + text::format_int(ev.predicted_head_count) +
               "  actual: " + text::format_int(ev.actual_head_count) + "\n";
        out += "  matched: " + text::format_uint(ev.matched) +
               "  spurious: " + text::format_uint(ev.unmatched_predicted) +
               "  missed: " + text::format_uint(ev.unmatched_actual) + "\n";
        out += "  confusion (rows actual, cols predicted, last = none):\n";
        for (const auto& row : ev.confusion.counts) {
            out += "   ";
            for (int c : row) out += " " + text::format_int(c);
            out += "\n";
        }
    }
    return out;
}

std::string serialize_report_jsonl(const CountReport& report) {
    std::string out;
    for (std::size_t i = 0; i < report.pairs.size(); ++i) {
        const PairReport& pair = report.pairs[i];
        for (const CountedEvent& ev : pair.events) {
            json rec;
            rec["type"] = "event";
            rec["pair"] = i;
            rec["receiver_a"] = pair.receiver_a;
            rec["receiver_b"] = pair.receiver_b;
            rec["start_a"] = ev.pair.a.start_index;
            rec["end_a"] = ev.pair.a.end_index;
            rec["start_b"] = ev.pair.b.start_index;
            rec["end_b"] = ev.pair.b.end_index;
            rec["predicted_group"] = ev.predicted_group;
            rec["period"] = ev.period;
            json feats;
            auto vals = ev.features.values();
            for (std::size_t j = 0; j < kNumFeatures; ++j)
                feats[std::string(kFeatureNames[j])] = vals[j];
            rec["features"] = feats;
            out += rec.dump();
            out += '\n';
        }
        json summary;
        summary["type"] = "pair_summary";
        summary["pair"] = i;
        summary["receiver_a"] = pair.receiver_a;
        summary["receiver_b"] = pair.receiver_b;
        summary["events"] = pair.events.size();
        summary["predicted_head_count"] = pair.predicted_head_count;
        summary["discarded_a"] = pair.discarded_a;
        summary["discarded_b"] = pair.discarded_b;
        summary["combined"] = (i == report.combined_index);
        out += summary.dump();
        out += '\n';
    }
    if (report.eval) {
        const EvalMetrics& ev = *report.eval;
        json rec;
        rec["type"] = "evaluation";
        rec["group_accuracy"] = ev.group_accuracy;
        rec["head_count_accuracy"] = ev.head_count_accuracy;
        rec["predicted_head_count"] = ev.predicted_head_count;
        rec["actual_head_count"] = ev.actual_head_count;
        rec["matched"] = ev.matched;
        rec["unmatched_predicted"] = ev.unmatched_predicted;
        rec["unmatched_actual"] = ev.unmatched_actual;
        rec["labels"] = ev.confusion.labels;
        rec["confusion"] = ev.confusion.counts;
        out += rec.dump();
        out += '\n';
    }
    return out;
}

std::string serialize_counted_events(const PairReport& report) {
    std::string out =
        "receiver_a,start_a,end_a,receiver_b,start_b,end_b,predicted_group,period";
    out += '\n';
    for (const CountedEvent& ev : report.events) {
        out += ev.pair.a.receiver_id.empty() ? report.receiver_a : ev.pair.a.receiver_id;
        out += ',';
        out += text::format_uint(ev.pair.a.start_index);
        out += ',';
        out += text::format_uint(ev.pair.a.end_index);
        out += ',';
        out += ev.pair.b.receiver_id.empty() ? report.receiver_b : ev.pair.b.receiver_id;
        out += ',';
        out += text::format_uint(ev.pair.b.start_index);
        out += ',';
        out += text::format_uint(ev.pair.b.end_index);
        out += ',';
        out += text::format_int(ev.predicted_group);
        out += ',';
        out += text::format_uint(ev.period);
        out += '\n';
    }
    return out;
}

}  // namespace rfcount
