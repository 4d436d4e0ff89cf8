#include "featstore.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <mutex>
#include <sstream>

#include "error.hpp"

namespace amc {

namespace {

constexpr double kCellPerEps = 8.0;   // index cell width in epsilon units
constexpr size_t kMaxProbes = 65536;  // cell-product cap before scanning

[[noreturn]] void store_fail(const std::string& path, size_t line,
                             const std::string& what) {
    std::ostringstream os;
    os << path << ": line " << line << ": " << what;
    throw Error(ErrorCode::Format, os.str());
}

uint64_t mix_cell(uint64_t h, int64_t cell) {
    // splitmix64 step over the previous hash xor the cell coordinate
    uint64_t z = h ^ (static_cast<uint64_t>(cell) + 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

}  // namespace

const char* outcome_kind_name(OutcomeKind k) {
    switch (k) {
        case OutcomeKind::DbHit: return "DB_HIT";
        case OutcomeKind::Classifier: return "CLASSIFIER";
        case OutcomeKind::Malicious: return "MALICIOUS";
    }
    return "?";
}

void MatchPolicy::validate() const {
    for (double e : tolerance) {
        if (!(e > 0.0) || !std::isfinite(e)) {
            throw Error(ErrorCode::Config, "match tolerances must be finite and > 0");
        }
    }
}

FeatureStore::FeatureStore(const std::array<double, kFeatureCount>& epsilon)
    : eps_(epsilon) {
    for (size_t i = 0; i < kFeatureCount; ++i) {
        if (!(eps_[i] > 0.0) || !std::isfinite(eps_[i])) {
            throw Error(ErrorCode::Config, "store epsilon must be finite and > 0");
        }
        cell_[i] = kCellPerEps * eps_[i];
    }
}

FeatureStore::FeatureStore(FeatureStore&& other) noexcept {
    std::unique_lock lock(other.mu_);
    eps_ = other.eps_;
    cell_ = other.cell_;
    records_ = std::move(other.records_);
    index_ = std::move(other.index_);
    next_id_ = other.next_id_;
}

FeatureStore& FeatureStore::operator=(FeatureStore&& other) noexcept {
    if (this == &other) return *this;
    std::scoped_lock lock(mu_, other.mu_);
    eps_ = other.eps_;
    cell_ = other.cell_;
    records_ = std::move(other.records_);
    index_ = std::move(other.index_);
    next_id_ = other.next_id_;
    return *this;
}

uint64_t FeatureStore::cell_hash(const std::array<double, kFeatureCount>& v) const {
    uint64_t h = 0x243f6a8885a308d3ull;
    for (size_t i = 0; i < kFeatureCount; ++i) {
        h = mix_cell(h, static_cast<int64_t>(std::floor(v[i] / cell_[i])));
    }
    return h;
}

void FeatureStore::index_record(size_t slot) {
    index_[cell_hash(records_[slot].features.values())].push_back(slot);
}

uint64_t FeatureStore::insert(const FeatureRecord& r) {
    if (!r.features.all_finite()) {
        throw Error(ErrorCode::Argument, "record has non-finite features");
    }
    if (r.label == Scheme::Unknown) {
        throw Error(ErrorCode::Argument, "record has no label");
    }
    std::unique_lock lock(mu_);
    FeatureRecord stored = r;
    stored.id = next_id_++;
    if (stored.created_at == 0) {
        stored.created_at = static_cast<int64_t>(std::time(nullptr));
    }
    records_.push_back(stored);
    index_record(records_.size() - 1);
    return stored.id;
}

std::optional<FeatureRecord> FeatureStore::get(uint64_t id) const {
    std::shared_lock lock(mu_);
    auto it = std::lower_bound(
        records_.begin(), records_.end(), id,
        [](const FeatureRecord& r, uint64_t v) { return r.id < v; });
    if (it == records_.end() || it->id != id) return std::nullopt;
    return *it;
}

size_t FeatureStore::size() const {
    std::shared_lock lock(mu_);
    return records_.size();
}

std::optional<MatchResult> FeatureStore::best_in(
    const std::vector<size_t>& slots, const std::array<double, kFeatureCount>& x,
    const MatchPolicy& policy) const {
    std::optional<MatchResult> best;
    for (size_t slot : slots) {
        const FeatureRecord& r = records_[slot];
        const auto rv = r.features.values();
        double dist = 0.0;
        bool inside = true;
        for (size_t i = 0; i < kFeatureCount; ++i) {
            const double d = std::fabs(x[i] - rv[i]);
            if (d > policy.tolerance[i]) {
                inside = false;
                break;
            }
            dist = std::max(dist, d / policy.tolerance[i]);
        }
        if (!inside) continue;
        if (!best || dist < best->distance ||
            (dist == best->distance && r.id < best->id)) {
            best = MatchResult{r.id, r.label, dist};
        }
    }
    return best;
}

std::optional<MatchResult> FeatureStore::match(const FeatureVector& x,
                                               const MatchPolicy& policy) const {
    policy.validate();
    if (!x.all_finite()) {
        throw Error(ErrorCode::Argument, "query has non-finite features");
    }
    const auto xv = x.values();
    std::shared_lock lock(mu_);

    std::array<int64_t, kFeatureCount> lo{}, hi{};
    size_t probes = 1;
    bool overflow = false;
    for (size_t i = 0; i < kFeatureCount; ++i) {
        lo[i] = static_cast<int64_t>(std::floor((xv[i] - policy.tolerance[i]) / cell_[i]));
        hi[i] = static_cast<int64_t>(std::floor((xv[i] + policy.tolerance[i]) / cell_[i]));
        const size_t span = static_cast<size_t>(hi[i] - lo[i] + 1);
        if (probes > kMaxProbes / span) {
            overflow = true;
            break;
        }
        probes *= span;
    }
    if (overflow) {
        // Tolerances far wider than the index granularity: the cell
        // product is no longer cheaper than scanning the records.
        std::vector<size_t> all(records_.size());
        for (size_t i = 0; i < all.size(); ++i) all[i] = i;
        return best_in(all, xv, policy);
    }

    std::optional<MatchResult> best;
    std::array<int64_t, kFeatureCount> cur = lo;
    for (;;) {
        uint64_t h = 0x243f6a8885a308d3ull;
        for (size_t i = 0; i < kFeatureCount; ++i) h = mix_cell(h, cur[i]);
        auto it = index_.find(h);
        if (it != index_.end()) {
            auto cand = best_in(it->second, xv, policy);
            if (cand && (!best || cand->distance < best->distance ||
                         (cand->distance == best->distance && cand->id < best->id))) {
                best = cand;
            }
        }
        size_t dim = 0;
        while (dim < kFeatureCount && cur[dim] == hi[dim]) {
            cur[dim] = lo[dim];
            ++dim;
        }
        if (dim == kFeatureCount) break;
        ++cur[dim];
    }
    return best;
}

std::optional<MatchResult> FeatureStore::scan_match(const FeatureVector& x,
                                                    const MatchPolicy& policy) const {
    policy.validate();
    if (!x.all_finite()) {
        throw Error(ErrorCode::Argument, "query has non-finite features");
    }
    const auto xv = x.values();
    std::shared_lock lock(mu_);
    std::optional<MatchResult> best;
    for (const FeatureRecord& r : records_) {
        const auto rv = r.features.values();
        double dist = 0.0;
        bool inside = true;
        for (size_t i = 0; i < kFeatureCount; ++i) {
            const double d = std::fabs(xv[i] - rv[i]);
            if (d > policy.tolerance[i]) {
                inside = false;
                break;
            }
            dist = std::max(dist, d / policy.tolerance[i]);
        }
        if (!inside) continue;
        if (!best || dist < best->distance ||
            (dist == best->distance && r.id < best->id)) {
            best = MatchResult{r.id, r.label, dist};
        }
    }
    return best;
}

void FeatureStore::persist(const std::string& path) const {
    std::shared_lock lock(mu_);
    std::ofstream f(path);
    if (!f) throw Error(ErrorCode::Io, "cannot open for writing: " + path);
    char buf[64];
    f << "AMCDB1 " << records_.size();
    for (double e : eps_) {
        std::snprintf(buf, sizeof(buf), " %.17g", e);
        f << buf;
    }
    f << "\n";
    for (const FeatureRecord& r : records_) {
        std::snprintf(buf, sizeof(buf), "%12llu %-4s",
                      static_cast<unsigned long long>(r.id), scheme_name(r.label));
        f << buf;
        for (double v : r.features.values()) {
            std::snprintf(buf, sizeof(buf), " %25.17g", v);
            f << buf;
        }
        std::snprintf(buf, sizeof(buf), " %25.17g %12lld %20llu",
                      r.snr_db, static_cast<long long>(r.created_at),
                      static_cast<unsigned long long>(r.source_seed));
        f << buf << "\n";
    }
    if (!f) throw Error(ErrorCode::Io, "write failed: " + path);
}

FeatureStore FeatureStore::load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error(ErrorCode::Io, "cannot open for reading: " + path);
    std::string line;
    if (!std::getline(f, line)) store_fail(path, 1, "empty file");
    std::istringstream hdr(line);
    std::string tag;
    size_t count = 0;
    std::array<double, kFeatureCount> eps{};
    if (!(hdr >> tag)) store_fail(path, 1, "missing header");
    if (tag != "AMCDB1") store_fail(path, 1, "unknown store version tag '" + tag + "'");
    if (!(hdr >> count)) store_fail(path, 1, "missing record count");
    for (size_t i = 0; i < kFeatureCount; ++i) {
        if (!(hdr >> eps[i])) store_fail(path, 1, "short epsilon vector");
    }

    FeatureStore store(eps);
    uint64_t max_id = 0;
    size_t lineno = 1;
    for (size_t n = 0; n < count; ++n) {
        if (!std::getline(f, line)) {
            store_fail(path, lineno + 1, "truncated: expected " +
                                             std::to_string(count) + " records, got " +
                                             std::to_string(n));
        }
        ++lineno;
        std::istringstream is(line);
        FeatureRecord r;
        std::string label;
        unsigned long long id = 0, seed = 0;
        long long created = 0;
        if (!(is >> id >> label)) store_fail(path, lineno, "bad record prefix");
        auto s = scheme_from_name(label);
        if (!s) store_fail(path, lineno, "unknown label '" + label + "'");
        r.label = *s;
        std::array<double, kFeatureCount> vals{};
        for (size_t i = 0; i < kFeatureCount; ++i) {
            if (!(is >> vals[i])) store_fail(path, lineno, "short feature vector");
        }
        r.features = FeatureVector::from_values(vals);
        if (!(is >> r.snr_db >> created >> seed)) {
            store_fail(path, lineno, "bad record suffix");
        }
        r.id = id;
        r.created_at = created;
        r.source_seed = seed;
        if (!r.features.all_finite()) store_fail(path, lineno, "non-finite features");
        if (r.id <= max_id) store_fail(path, lineno, "ids not strictly increasing");
        max_id = r.id;
        store.records_.push_back(r);
        store.index_record(store.records_.size() - 1);
    }
    store.next_id_ = max_id + 1;
    return store;
}

ClassificationOutcome classify_pipeline(FeatureStore& store,
                                        const MulticlassModel& model,
                                        const Waveform& w,
                                        const MatchPolicy& policy,
                                        const FeatureConfig& fcfg) {
    const auto t0 = std::chrono::steady_clock::now();
    ClassificationOutcome out;
    const FeatureVector fx = extract_all(w, fcfg);
    if (auto hit = store.match(fx, policy)) {
        out.kind = OutcomeKind::DbHit;
        out.label = hit->label;
        out.matched_id = hit->id;
    } else if (policy.miss_action == MissAction::ClassifyFallback) {
        out.kind = OutcomeKind::Classifier;
        const Scheme predicted = predict_multiclass(model, fx);
        out.label = predicted;
        if (policy.insert_on_classify) {
            FeatureRecord r;
            r.label = predicted;
            r.features = fx;
            r.snr_db = w.snr_db;
            r.source_seed = w.seed;
            store.insert(r);
        }
    } else {
        out.kind = OutcomeKind::Malicious;
    }
    out.elapsed_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(
                         std::chrono::steady_clock::now() - t0)
                         .count();
    return out;
}

std::array<double, kFeatureCount> derive_tolerances(const LabeledDataset& ds,
                                                    double factor) {
    if (ds.empty()) {
        throw Error(ErrorCode::InsufficientData,
                    "cannot derive tolerances from an empty dataset");
    }
    if (!(factor > 0.0)) {
        throw Error(ErrorCode::Config, "tolerance factor must be > 0");
    }
    const auto classes = ds.class_list();
    std::array<double, kFeatureCount> ssq{};
    size_t total = 0;
    size_t included = 0;
    for (Scheme c : classes) {
        std::array<double, kFeatureCount> mean{};
        size_t n = 0;
        for (const auto& r : ds.rows) {
            if (r.label != c) continue;
            const auto v = r.features.values();
            for (size_t i = 0; i < kFeatureCount; ++i) mean[i] += v[i];
            ++n;
        }
        if (n < 2) continue;
        for (size_t i = 0; i < kFeatureCount; ++i) mean[i] /= static_cast<double>(n);
        for (const auto& r : ds.rows) {
            if (r.label != c) continue;
            const auto v = r.features.values();
            for (size_t i = 0; i < kFeatureCount; ++i) {
                const double d = v[i] - mean[i];
                ssq[i] += d * d;
            }
        }
        total += n;
        ++included;
    }
    if (included == 0) {
        throw Error(ErrorCode::InsufficientData,
                    "need at least one class with 2+ rows to derive tolerances");
    }
    std::array<double, kFeatureCount> out{};
    const double denom = static_cast<double>(total - included);
    for (size_t i = 0; i < kFeatureCount; ++i) {
        out[i] = std::max(factor * std::sqrt(ssq[i] / denom), 1e-9);
    }
    return out;
}

}  // namespace amc
