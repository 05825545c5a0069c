#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "corpus.hpp"
#include "approx.hpp"
#include "doctest.h"
#include "rfcount/errors.hpp"
#include "rfcount/pipeline.hpp"

using namespace rfcount;

namespace {

lda::Model corpus_model(std::uint64_t seed = 401) {
    return lda::fit(testcorpus::build(25, seed).features);
}

ConfusionMatrix matrix_from(const std::vector<std::vector<int>>& rows) {
    ConfusionMatrix m = ConfusionMatrix::zero({1, 2, 3, 4, 5});
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < rows[r].size(); ++c) m.counts[r][c] = rows[r][c];
    return m;
}

LabeledSpan span(std::size_t begin, std::size_t end, int label) {
    return {SampleSpan{begin, end}, label};
}

}  // namespace

TEST_SUITE("pipeline") {

TEST_CASE("published controlled-environment matrix arithmetic") {
    ConfusionMatrix m = matrix_from({{47, 3, 0, 0, 0},
                                     {3, 46, 1, 0, 0},
                                     {0, 3, 44, 2, 1},
                                     {0, 3, 7, 31, 9},
                                     {0, 0, 0, 14, 36}});
    CHECK(m.total() == 250);
    CHECK(m.diagonal() == 204);
    CHECK(m.group_accuracy() == testutil::within(0.816, 1e-6));

    // Column-weighted prediction count recovers the published head count.
    int predicted = 0;
    for (std::size_t c = 0; c < 5; ++c) {
        int colsum = 0;
        for (std::size_t r = 0; r < m.counts.size(); ++r) colsum += m.counts[r][c];
        predicted += m.labels[c] * colsum;
    }
    CHECK(predicted == 734);
    CHECK(head_count_accuracy(predicted, 750) == testutil::within(0.9787, 1e-4));
}

TEST_CASE("published uncontrolled-environment matrix arithmetic") {
    ConfusionMatrix m = matrix_from({{17, 1, 2, 0, 0},
                                     {2, 3, 0, 0, 0},
                                     {1, 0, 2, 0, 0}});
    CHECK(m.total() == 28);
    CHECK(m.diagonal() == 22);
    CHECK(m.group_accuracy() == testutil::within(22.0 / 28.0, 1e-6));
}

TEST_CASE("head count accuracy is symmetric and guarded") {
    CHECK(head_count_accuracy(734, 750) == doctest::Approx(734.0 / 750.0));
    CHECK(head_count_accuracy(750, 734) == head_count_accuracy(734, 750));
    CHECK(head_count_accuracy(0, 0) == 1.0);
    CHECK(head_count_accuracy(5, 0) == 0.0);
    CHECK(head_count_accuracy(3, 3) == 1.0);
    CHECK_THROWS_AS(head_count_accuracy(-1, 5), DomainError);
}

TEST_CASE("span matching picks maximal overlap") {
    std::vector<SampleSpan> a{{0, 10}, {20, 30}};
    std::vector<SampleSpan> b{{5, 12}, {40, 50}};
    auto matches = match_spans(a, b);
    REQUIRE(matches.size() == 1);
    CHECK(matches[0] == std::pair<std::size_t, std::size_t>{0, 0});

    // Two candidates for one span: the larger overlap wins.
    std::vector<SampleSpan> one{{0, 10}};
    std::vector<SampleSpan> options{{0, 4}, {2, 10}};
    auto best = match_spans(one, options);
    REQUIRE(best.size() == 1);
    CHECK(best[0].second == 1);

    // Equal overlaps resolve to the earlier candidate.
    std::vector<SampleSpan> tied{{0, 4}, {6, 10}};
    std::vector<SampleSpan> middle{{2, 8}};
    auto tie = match_spans(tied, middle);
    REQUIRE(tie.size() == 1);
    CHECK(tie[0].first == 0);
}

TEST_CASE("span evaluation separates hits, spurious, and missed") {
    std::vector<LabeledSpan> predicted{span(0, 10, 2), span(100, 110, 4)};
    std::vector<LabeledSpan> actual{span(0, 10, 2), span(20, 30, 3)};
    EvalMetrics e = evaluate_spans(predicted, actual);

    CHECK(e.matched == 1);
    CHECK(e.unmatched_predicted == 1);
    CHECK(e.unmatched_actual == 1);
    CHECK(e.predicted_head_count == 6);
    CHECK(e.actual_head_count == 5);

    // Labels present: {2, 3, 4}; miss bucket at index 3.
    REQUIRE(e.confusion.labels == std::vector<int>{2, 3, 4});
    CHECK(e.confusion.counts[0][0] == 1);  // 2 predicted as 2
    CHECK(e.confusion.counts[1][3] == 1);  // actual 3 missed
    CHECK(e.confusion.counts[3][2] == 1);  // spurious 4
    CHECK(e.confusion.total() == 3);
    CHECK(e.group_accuracy == doctest::Approx(1.0 / 3.0));

    EvalMetrics perfect = evaluate_spans(actual, actual);
    CHECK(perfect.group_accuracy == 1.0);
    CHECK(perfect.head_count_accuracy == 1.0);
    CHECK(perfect.unmatched_predicted == 0);
    CHECK(perfect.unmatched_actual == 0);
}

TEST_CASE("quiet trace counts nobody") {
    SynthConfig cfg;
    cfg.n_samples = 1500;
    cfg.rng_seed = 402;
    SynthResult r = generate_trace(cfg, {});
    lda::Model model = corpus_model();

    CountReport report = run_count(r.trace, model);
    REQUIRE(report.pairs.size() == 1);
    CHECK(report.pairs[0].events.empty());
    CHECK(report.pairs[0].predicted_head_count == 0);

    evaluate_report(report, r.truth);
    REQUIRE(report.eval.has_value());
    CHECK(report.eval->matched == 0);
    CHECK(report.eval->unmatched_predicted == 0);
    CHECK(report.eval->unmatched_actual == 0);
    CHECK(report.eval->head_count_accuracy == 1.0);
}

TEST_CASE("corridor scenario counts ten crossings in order") {
    SynthConfig cfg;
    cfg.rng_seed = 403;
    auto events = make_scenario(cfg, {2, 1, 1, 3, 1, 1, 1, 1, 3, 1});
    cfg.n_samples = testcorpus::auto_samples(events);
    SynthResult r = generate_trace(cfg, events);
    lda::Model model = corpus_model();

    CountReport report = run_count(r.trace, model);
    REQUIRE(report.pairs.size() == 1);
    const PairReport& pair = report.pairs[0];
    REQUIRE(pair.events.size() == 10);
    for (std::size_t i = 1; i < pair.events.size(); ++i)
        CHECK(pair.events[i].pair.a.start_index > pair.events[i - 1].pair.a.start_index);

    evaluate_report(report, r.truth);
    REQUIRE(report.eval.has_value());
    CHECK(report.eval->matched == 10);
    CHECK(report.eval->group_accuracy == 1.0);
    CHECK(report.eval->head_count_accuracy == 1.0);
    CHECK(pair.predicted_head_count == 15);
}

TEST_CASE("head count equals the column-weighted confusion total") {
    testcorpus::Corpus corpus = testcorpus::build(25, 404);
    lda::Model model = lda::fit(corpus.features);
    CountReport report = run_count(corpus.synth.trace, model);
    evaluate_report(report, corpus.synth.truth);
    REQUIRE(report.eval.has_value());

    const ConfusionMatrix& m = report.eval->confusion;
    int weighted = 0;
    for (std::size_t c = 0; c < m.labels.size(); ++c) {
        int colsum = 0;
        for (std::size_t r = 0; r < m.counts.size(); ++r) colsum += m.counts[r][c];
        weighted += m.labels[c] * colsum;
    }
    CHECK(report.eval->predicted_head_count == weighted);
    CHECK(report.pairs[report.combined_index].predicted_head_count == weighted);
}

TEST_CASE("in-process staging reproduces run_count exactly") {
    SynthConfig cfg;
    cfg.rng_seed = 405;
    auto scenario = make_scenario(cfg, {1, 4, 2, 5, 3});
    cfg.n_samples = testcorpus::auto_samples(scenario);
    SynthResult r = generate_trace(cfg, scenario);
    lda::Model model = corpus_model();

    DetectorConfig det;
    CountReport report = run_count(r.trace, model, {det, {}, std::nullopt});

    // Stage by hand with the same primitives.
    auto side = [&](const std::string& id) {
        auto stats = window_stats(fluctuations(r.trace.at(id)), det.window);
        auto decisions = detect(stats, det.method, det.prob_threshold, det.std_threshold);
        return segment_events(stats, decisions, det.method, id, det.min_duration, det.merge_gap);
    };
    FusionResult fusion = fuse_receivers(side("R1"), side("R2"), det.pairing_window);

    REQUIRE(report.pairs.size() == 1);
    const PairReport& pair = report.pairs[0];
    REQUIRE(pair.events.size() == fusion.pairs.size());
    int head = 0;
    for (std::size_t i = 0; i < fusion.pairs.size(); ++i) {
        CHECK(pair.events[i].pair == fusion.pairs[i]);
        EventFeatureVector f = extract_features(fusion.pairs[i]);
        CHECK(pair.events[i].features == f);
        CHECK(pair.events[i].predicted_group == lda::classify(model, f));
        head += pair.events[i].predicted_group;
    }
    CHECK(pair.predicted_head_count == head);
}

TEST_CASE("reports are deterministic") {
    testcorpus::Corpus corpus = testcorpus::build(10, 406);
    lda::Model model = lda::fit(corpus.features);

    CountConfig cfg;
    cfg.period_samples = 400;
    CountReport a = run_count(corpus.synth.trace, model, cfg);
    CountReport b = run_count(corpus.synth.trace, model, cfg);
    evaluate_report(a, corpus.synth.truth);
    evaluate_report(b, corpus.synth.truth);
    CHECK(serialize_report_jsonl(a) == serialize_report_jsonl(b));
    CHECK(format_report_text(a) == format_report_text(b));
    CHECK(serialize_counted_events(a.pairs[0]) == serialize_counted_events(b.pairs[0]));
}

TEST_CASE("periods annotate events by their start index") {
    testcorpus::Corpus corpus = testcorpus::build(10, 407);
    lda::Model model = lda::fit(corpus.features);
    CountConfig cfg;
    cfg.period_samples = 250;
    CountReport report = run_count(corpus.synth.trace, model, cfg);
    for (const CountedEvent& e : report.pairs[0].events)
        CHECK(e.period == e.pair.a.start_index / 250);

    cfg.period_samples = 0;
    CHECK_THROWS_AS(run_count(corpus.synth.trace, model, cfg), ConfigError);
}

TEST_CASE("three receivers form two pairs around the shared middle") {
    SynthConfig cfg;
    cfg.rng_seed = 408;
    auto scenario = make_scenario(cfg, {1, 2, 3, 4, 5});
    cfg.n_samples = testcorpus::auto_samples(scenario);
    SynthResult r = generate_trace(cfg, scenario);

    // Third receiver: receiver 1's twin on the other flank of the zone.
    std::vector<ReceiverStream> streams = r.trace.receivers();
    ReceiverStream outer = r.trace.at("R1");
    outer.receiver_id = "R3";
    for (auto& s : outer.samples) s.receiver_id = "R3";
    streams.push_back(std::move(outer));
    Trace trace(std::move(streams), r.trace.inter_packet_interval_ms());

    lda::Model good = corpus_model(409);
    // A deliberately poor model: same corpus, labels shuffled across events.
    testcorpus::Corpus scrambled = testcorpus::build(25, 409);
    std::vector<int> labels;
    for (const auto& f : scrambled.features) labels.push_back(*f.label);
    std::mt19937_64 rng(412);
    std::shuffle(labels.begin(), labels.end(), rng);
    for (std::size_t i = 0; i < labels.size(); ++i) scrambled.features[i].label = labels[i];
    lda::Model bad = lda::fit(scrambled.features);
    REQUIRE(good.resubstitution_accuracy > bad.resubstitution_accuracy);

    CountConfig cc;
    cc.receivers = {"R1", "R2", "R3"};
    CountReport report = run_count(trace, {&good, &bad}, cc);
    REQUIRE(report.pairs.size() == 2);
    CHECK(report.pairs[0].receiver_a == "R1");
    CHECK(report.pairs[0].receiver_b == "R2");
    CHECK(report.pairs[1].receiver_a == "R3");
    CHECK(report.pairs[1].receiver_b == "R2");
    CHECK(report.pairs[0].events.size() == 5);
    CHECK(report.pairs[1].events.size() == 5);
    CHECK(report.combined_index == 0);

    CountReport swapped = run_count(trace, {&bad, &good}, cc);
    CHECK(swapped.combined_index == 1);

    // One shared model covers both pairs.
    CountReport shared = run_count(trace, {&good}, cc);
    CHECK(shared.pairs.size() == 2);
    CHECK(shared.combined_index == 0);  // tie goes to the first pair
}

TEST_CASE("run_count rejects bad configurations") {
    testcorpus::Corpus corpus = testcorpus::build(10, 410);
    lda::Model model = lda::fit(corpus.features);
    const Trace& trace = corpus.synth.trace;

    CountConfig one_rx;
    one_rx.receivers = {"R1"};
    CHECK_THROWS_AS(run_count(trace, model, one_rx), ConfigError);

    CountConfig missing;
    missing.receivers = {"R1", "R9"};
    CHECK_THROWS_AS(run_count(trace, model, missing), ConfigError);

    CountConfig four;
    four.receivers = {"R1", "R2", "R1", "R2"};
    CHECK_THROWS_AS(run_count(trace, model, four), ConfigError);

    CHECK_THROWS_AS(run_count(trace, std::vector<const lda::Model*>{}, {}), ConfigError);
    CHECK_THROWS_AS(run_count(trace, {nullptr}, {}), ConfigError);

    lda::Model second = model;
    CHECK_THROWS_AS(run_count(trace, {&model, &second}, {}), ConfigError);  // 1 pair, 2 models
}

TEST_CASE("counted-event csv lists one row per event") {
    testcorpus::Corpus corpus = testcorpus::build(10, 411);
    lda::Model model = lda::fit(corpus.features);
    CountReport report = run_count(corpus.synth.trace, model);
    std::string csv = serialize_counted_events(report.pairs[0]);

    CHECK(csv.rfind("receiver_a,start_a,end_a,receiver_b,start_b,end_b,predicted_group,period",
                    0) == 0);
    std::size_t rows = 0;
    for (char ch : csv)
        if (ch == '\n') ++rows;
    CHECK(rows == report.pairs[0].events.size() + 1);
}

}  // TEST_SUITE
