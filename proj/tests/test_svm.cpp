#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <vector>

#include "brute_dual.hpp"
#include "error.hpp"
#include "svm.hpp"
#include "test_util.hpp"

using namespace amc;

namespace {

LabeledDataset cluster_dataset(const std::vector<Scheme>& classes,
                               const std::vector<std::array<double, 2>>& centers,
                               int per_class, double spread, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, spread);
    LabeledDataset ds;
    for (size_t c = 0; c < classes.size(); ++c) {
        for (int i = 0; i < per_class; ++i) {
            std::array<double, kFeatureCount> v{};
            v[0] = centers[c][0] + g(rng);
            v[1] = centers[c][1] + g(rng);
            ds.add({FeatureVector::from_values(v), classes[c], 15.0,
                    static_cast<uint64_t>(i)});
        }
    }
    return ds;
}

std::string slurp(const std::string& path) {
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("two opposed points give the analytic maximum-margin line") {
    SmoConfig cfg;
    cfg.tol = 1e-8;
    SmoDiagnostics diag;
    const BinarySvmModel m =
        train_binary({{1.0}, {0.0}}, {+1, -1}, cfg, &diag);
    REQUIRE(diag.alphas.size() == 2);
    CHECK(diag.alphas[0] == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(diag.alphas[1] == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(m.bias == doctest::Approx(-1.0).epsilon(1e-6));
    CHECK(predict_binary(m, {1.0}) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(predict_binary(m, {0.0}) == doctest::Approx(-1.0).epsilon(1e-6));
    CHECK(predict_binary(m, {2.0}) == doctest::Approx(3.0).epsilon(1e-6));
}

TEST_CASE("XOR is solved by the degree-2 polynomial kernel") {
    SmoConfig cfg;
    cfg.kernel.exponent = 2;
    cfg.kernel.offset = 1.0;
    const std::vector<std::vector<double>> rows = {
        {1, 1}, {-1, -1}, {1, -1}, {-1, 1}};
    const std::vector<int> y = {+1, +1, -1, -1};
    const BinarySvmModel m = train_binary(rows, y, cfg);
    for (size_t i = 0; i < rows.size(); ++i) {
        CHECK(predict_binary(m, rows[i]) * y[i] > 0.0);
    }
}

TEST_CASE("SMO reaches the brute-force dual optimum on tiny sets") {
    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> ur(-2.0, 2.0);
    for (int t = 0; t < 15; ++t) {
        const size_t n = 2 + rng() % 5;
        std::vector<std::vector<double>> rows(n);
        std::vector<int> y(n);
        bool pos = false, neg = false;
        for (size_t i = 0; i < n; ++i) {
            rows[i] = {ur(rng), ur(rng)};
            y[i] = (rng() & 1) ? 1 : -1;
            (y[i] > 0 ? pos : neg) = true;
        }
        if (!pos) y[0] = 1;
        if (!neg) y[n - 1] = -1;
        SmoConfig cfg;
        cfg.box_c = (t % 3 == 0) ? 0.5 : (t % 3 == 1 ? 1.0 : 10.0);
        cfg.tol = 1e-7;
        cfg.kernel.exponent = (t % 2) + 1;
        cfg.kernel.offset = (t % 2) ? 1.0 : 0.0;
        cfg.track_objective = true;
        SmoDiagnostics diag;
        train_binary(rows, y, cfg, &diag);
        const double oracle =
            testutil::brute_dual(rows, y, cfg.box_c, cfg.kernel);
        CHECK(std::fabs(diag.final_objective - oracle) <= 1e-6);
        CHECK(diag.max_kkt_residual <= cfg.tol);
        for (size_t i = 1; i < diag.objective_trace.size(); ++i) {
            CHECK(diag.objective_trace[i] >= diag.objective_trace[i - 1] - 1e-9);
        }
    }
}

TEST_CASE("kkt_report certifies a trained model and flags a corrupted one") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ur(-1.5, 1.5);
    std::vector<std::vector<double>> rows;
    std::vector<int> y;
    for (int i = 0; i < 24; ++i) {
        const double a = ur(rng), b = ur(rng);
        rows.push_back({a, b});
        y.push_back(a + b > 0.2 ? 1 : -1);
    }
    SmoConfig cfg;
    cfg.tol = 1e-5;
    BinarySvmModel m = train_binary(rows, y, cfg);
    const KktReport good = kkt_report(m, rows, y, cfg.tol);
    CHECK(good.max_residual <= cfg.tol);
    CHECK(good.violations == 0);
    CHECK(good.equality_gap < 1e-9);

    BinarySvmModel broken = m;
    broken.bias += 0.5;
    const KktReport bad = kkt_report(broken, rows, y, cfg.tol);
    CHECK(bad.violations > 0);
    CHECK(bad.max_residual > cfg.tol);
}

TEST_CASE("multiclass training separates Gaussian clusters perfectly") {
    const std::vector<Scheme> classes = {Scheme::AM, Scheme::DSB, Scheme::LSB};
    const std::vector<std::array<double, 2>> centers = {
        {0.0, 0.0}, {4.0, 0.0}, {0.0, 4.0}};
    const LabeledDataset train = cluster_dataset(classes, centers, 20, 0.25, 1);
    const LabeledDataset held = cluster_dataset(classes, centers, 20, 0.25, 2);

    SmoConfig cfg;
    const MulticlassModel m = train_multiclass(train, cfg);
    CHECK(m.pair_models.size() == 3);
    CHECK(m.classes == classes);
    for (const auto& r : train.rows) {
        CHECK(predict_multiclass(m, r.features) == r.label);
    }
    for (const auto& r : held.rows) {
        CHECK(predict_multiclass(m, r.features) == r.label);
    }
}

TEST_CASE("training is deterministic") {
    const std::vector<Scheme> classes = {Scheme::ASK2, Scheme::PSK2};
    const std::vector<std::array<double, 2>> centers = {{0.0, 1.0}, {1.0, 0.0}};
    const LabeledDataset ds = cluster_dataset(classes, centers, 15, 0.4, 5);
    SmoConfig cfg;
    const MulticlassModel a = train_multiclass(ds, cfg);
    const MulticlassModel b = train_multiclass(ds, cfg);
    save_model(a, "svm_det_a.tmp");
    save_model(b, "svm_det_b.tmp");
    CHECK(slurp("svm_det_a.tmp") == slurp("svm_det_b.tmp"));
    std::remove("svm_det_a.tmp");
    std::remove("svm_det_b.tmp");
}

TEST_CASE("normalization maps training range to [0,1] and clamps") {
    LabeledDataset ds;
    std::array<double, kFeatureCount> lo{};
    std::array<double, kFeatureCount> hi{};
    for (size_t i = 0; i < kFeatureCount; ++i) {
        lo[i] = static_cast<double>(i);
        hi[i] = static_cast<double>(i) + 2.0;
    }
    hi[4] = lo[4];  // constant column
    ds.add({FeatureVector::from_values(lo), Scheme::AM, 15.0, 1});
    ds.add({FeatureVector::from_values(hi), Scheme::DSB, 15.0, 2});

    const Normalization n = normalize_fit(ds);
    const auto at_lo =
        normalize_apply(n, std::vector<double>(lo.begin(), lo.end()));
    const auto at_hi =
        normalize_apply(n, std::vector<double>(hi.begin(), hi.end()));
    for (size_t i = 0; i < kFeatureCount; ++i) {
        if (i == 4) {
            CHECK(at_lo[i] == 0.5);
            CHECK(at_hi[i] == 0.5);
        } else {
            CHECK(at_lo[i] == doctest::Approx(0.0));
            CHECK(at_hi[i] == doctest::Approx(1.0));
        }
    }
    std::vector<double> outside(lo.begin(), lo.end());
    outside[0] -= 100.0;
    outside[1] += 100.0;
    const auto clamped = normalize_apply(n, outside);
    CHECK(clamped[0] == 0.0);
    CHECK(clamped[1] == 1.0);
}

TEST_CASE("vote ties fall back to margin sums, zero decisions to name order") {
    // hand-built three-class model: with no support vectors the binary
    // decision value is just the bias
    MulticlassModel m;
    m.classes = {Scheme::AM, Scheme::DSB, Scheme::LSB};
    m.norm.lo.assign(kFeatureCount, 0.0);
    m.norm.hi.assign(kFeatureCount, 1.0);
    auto pair = [](Scheme p, Scheme n, double bias) {
        BinarySvmModel b;
        b.positive_class = p;
        b.negative_class = n;
        b.bias = bias;
        b.box_c = 1.0;
        return b;
    };
    // AM beats DSB, LSB beats AM, DSB beats LSB: a three-way 1-1-1 tie
    m.pair_models = {pair(Scheme::AM, Scheme::DSB, 0.8),
                     pair(Scheme::AM, Scheme::LSB, -0.5),
                     pair(Scheme::DSB, Scheme::LSB, 0.3)};

    FeatureVector x;  // all zeros is fine; only biases matter
    VoteDetail detail;
    // margin sums: AM 0.8+0.5=1.3, DSB 0.8+0.3=1.1, LSB 0.5+0.3=0.8
    CHECK(predict_multiclass(m, x, &detail) == Scheme::AM);
    CHECK(detail.votes == std::vector<int>{1, 1, 1});
    CHECK(detail.margin_sums[0] == doctest::Approx(1.3));

    // all-zero decisions vote for the alphabetically first name of each
    // pair: AM, AM, DSB -> AM wins outright
    m.pair_models = {pair(Scheme::AM, Scheme::DSB, 0.0),
                     pair(Scheme::AM, Scheme::LSB, 0.0),
                     pair(Scheme::DSB, Scheme::LSB, 0.0)};
    CHECK(predict_multiclass(m, x) == Scheme::AM);

    BinarySvmModel zero = pair(Scheme::DSB, Scheme::AM, 0.0);
    CHECK(binary_decision(zero, 0.0) == Scheme::AM);
    CHECK(binary_decision(zero, 0.1) == Scheme::DSB);
    CHECK(binary_decision(zero, -0.1) == Scheme::AM);
}

TEST_CASE("model files round-trip and unknown versions are rejected") {
    const std::vector<Scheme> classes = {Scheme::FM, Scheme::FSK2, Scheme::PSK4};
    const std::vector<std::array<double, 2>> centers = {
        {0.0, 0.0}, {3.0, 1.0}, {1.0, 3.0}};
    const LabeledDataset ds = cluster_dataset(classes, centers, 12, 0.3, 9);
    SmoConfig cfg;
    cfg.kernel.exponent = 2;
    cfg.kernel.offset = 1.0;
    const MulticlassModel m = train_multiclass(ds, cfg);
    save_model(m, "svm_io.tmp");
    const MulticlassModel r = load_model("svm_io.tmp");

    CHECK(r.classes == m.classes);
    CHECK(r.kernel.exponent == m.kernel.exponent);
    CHECK(r.kernel.offset == m.kernel.offset);
    CHECK(r.box_c == m.box_c);
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(-1.0, 5.0);
    for (int i = 0; i < 200; ++i) {
        std::array<double, kFeatureCount> v{};
        v[0] = u(rng);
        v[1] = u(rng);
        const FeatureVector x = FeatureVector::from_values(v);
        CHECK(predict_multiclass(m, x) == predict_multiclass(r, x));
    }

    std::string text = slurp("svm_io.tmp");
    {
        std::ofstream f("svm_io_bad.tmp");
        f << "AMCSVM2\n" << text.substr(text.find('\n') + 1);
    }
    CHECK_AMC_ERROR(load_model("svm_io_bad.tmp"), ErrorCode::Format);
    {
        std::ofstream f("svm_io_trunc.tmp");
        f << text.substr(0, text.size() / 2);
    }
    CHECK_AMC_ERROR(load_model("svm_io_trunc.tmp"), ErrorCode::Format);
    CHECK_AMC_ERROR(load_model("svm_io_missing.tmp"), ErrorCode::Io);
    std::remove("svm_io.tmp");
    std::remove("svm_io_bad.tmp");
    std::remove("svm_io_trunc.tmp");
}

TEST_CASE("configuration and dataset preconditions are enforced") {
    SmoConfig cfg;
    cfg.box_c = 0.0;
    CHECK_AMC_ERROR(cfg.validate(), ErrorCode::Config);
    cfg = {};
    cfg.tol = 0.0;
    CHECK_AMC_ERROR(cfg.validate(), ErrorCode::Config);
    cfg = {};
    cfg.kernel.exponent = 0;
    CHECK_AMC_ERROR(cfg.validate(), ErrorCode::Config);
    cfg = {};
    cfg.kernel.offset = -1.0;
    CHECK_AMC_ERROR(cfg.validate(), ErrorCode::Config);
    cfg = {};
    cfg.max_passes = 0;
    CHECK_AMC_ERROR(cfg.validate(), ErrorCode::Config);

    cfg = {};
    CHECK_AMC_ERROR(train_binary({}, {}, cfg), ErrorCode::InsufficientData);
    CHECK_AMC_ERROR(train_binary({{1.0}, {2.0}}, {1, 1}, cfg), ErrorCode::Degenerate);
    CHECK_AMC_ERROR(train_binary({{1.0}, {2.0}}, {1, 2}, cfg), ErrorCode::Argument);
    CHECK_AMC_ERROR(train_binary({{1.0}, {2.0, 3.0}}, {1, -1}, cfg),
                    ErrorCode::Shape);

    LabeledDataset single;
    std::array<double, kFeatureCount> v{};
    single.add({FeatureVector::from_values(v), Scheme::AM, 15.0, 1});
    v[0] = 1.0;
    single.add({FeatureVector::from_values(v), Scheme::AM, 15.0, 2});
    CHECK_AMC_ERROR(train_multiclass(single, cfg), ErrorCode::InsufficientData);

    v[0] = 2.0;
    single.add({FeatureVector::from_values(v), Scheme::DSB, 15.0, 3});
    // DSB has a single row
    CHECK_AMC_ERROR(train_multiclass(single, cfg), ErrorCode::InsufficientData);
}
