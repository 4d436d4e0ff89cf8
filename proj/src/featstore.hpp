#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "features.hpp"
#include "scheme.hpp"
#include "svm.hpp"
#include "synth.hpp"

namespace amc {

struct FeatureRecord {
    uint64_t id = 0;  // assigned by the store on insert
    Scheme label = Scheme::Unknown;
    FeatureVector features;
    double snr_db = 0.0;
    int64_t created_at = 0;  // seconds since epoch; 0 = fill at insert
    uint64_t source_seed = 0;
};

enum class MissAction { StrictMalicious, ClassifyFallback };

struct MatchPolicy {
    std::array<double, kFeatureCount> tolerance;  // per-feature eps > 0
    MissAction miss_action = MissAction::ClassifyFallback;
    bool insert_on_classify = false;

    void validate() const;
};

struct MatchResult {
    uint64_t id = 0;
    Scheme label = Scheme::Unknown;
    double distance = 0.0;  // max_i |x_i - r_i| / eps_i
};

enum class OutcomeKind { DbHit, Classifier, Malicious };

struct ClassificationOutcome {
    OutcomeKind kind = OutcomeKind::Malicious;
    std::optional<Scheme> label;
    std::optional<uint64_t> matched_id;
    int64_t elapsed_ns = 0;
};

const char* outcome_kind_name(OutcomeKind k);

// In-memory record set with a grid-hash index over quantized feature
// cells. Single writer, concurrent readers. The epsilon vector fixes
// the index cell size; queries may use any tolerance.
class FeatureStore {
  public:
    explicit FeatureStore(const std::array<double, kFeatureCount>& epsilon);
    FeatureStore(FeatureStore&& other) noexcept;
    FeatureStore& operator=(FeatureStore&& other) noexcept;

    uint64_t insert(const FeatureRecord& r);
    std::optional<FeatureRecord> get(uint64_t id) const;
    size_t size() const;
    const std::array<double, kFeatureCount>& epsilon() const { return eps_; }

    // Indexed tolerance-box lookup: nearest candidate by normalized
    // Chebyshev distance, ties to the lowest id.
    std::optional<MatchResult> match(const FeatureVector& x,
                                     const MatchPolicy& policy) const;

    // Same contract via a plain linear scan; the unindexed baseline.
    std::optional<MatchResult> scan_match(const FeatureVector& x,
                                          const MatchPolicy& policy) const;

    void persist(const std::string& path) const;
    static FeatureStore load(const std::string& path);

  private:
    uint64_t cell_hash(const std::array<double, kFeatureCount>& v) const;
    void index_record(size_t slot);
    std::optional<MatchResult> best_in(const std::vector<size_t>& slots,
                                       const std::array<double, kFeatureCount>& x,
                                       const MatchPolicy& policy) const;

    std::array<double, kFeatureCount> eps_;
    std::array<double, kFeatureCount> cell_;  // quantization width per dim
    std::vector<FeatureRecord> records_;
    std::unordered_map<uint64_t, std::vector<size_t>> index_;
    uint64_t next_id_ = 1;
    mutable std::shared_mutex mu_;
};

// classify_pipeline: extract features, try the store, then apply the
// policy (classifier fallback or malicious flag). Timed end to end.
ClassificationOutcome classify_pipeline(FeatureStore& store,
                                        const MulticlassModel& model,
                                        const Waveform& w,
                                        const MatchPolicy& policy,
                                        const FeatureConfig& fcfg = {});

// Per-feature 0.25 * pooled within-class standard deviation, floored
// at 1e-9 so degenerate columns still give a usable tolerance.
std::array<double, kFeatureCount> derive_tolerances(const LabeledDataset& ds,
                                                    double factor = 0.25);

}  // namespace amc
