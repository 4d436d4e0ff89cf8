#include "amc.h"

#include <array>
#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "dataset.hpp"
#include "error.hpp"
#include "featstore.hpp"
#include "features.hpp"
#include "scheme.hpp"
#include "svm.hpp"
#include "synth.hpp"
#include "wavefile.hpp"

struct amc_waveform { amc::Waveform w; };
struct amc_dataset { amc::LabeledDataset ds; };
struct amc_model { amc::MulticlassModel m; };
struct amc_store { amc::FeatureStore s; };

namespace {

thread_local std::string g_last_error;

int map_code(amc::ErrorCode c) {
    switch (c) {
        case amc::ErrorCode::Argument: return AMC_ERR_ARGUMENT;
        case amc::ErrorCode::Config: return AMC_ERR_CONFIG;
        case amc::ErrorCode::Shape: return AMC_ERR_SHAPE;
        case amc::ErrorCode::Degenerate: return AMC_ERR_DEGENERATE;
        case amc::ErrorCode::EmptyMask: return AMC_ERR_EMPTY_MASK;
        case amc::ErrorCode::Numeric: return AMC_ERR_NUMERIC;
        case amc::ErrorCode::InsufficientData: return AMC_ERR_INSUFFICIENT_DATA;
        case amc::ErrorCode::Convergence: return AMC_ERR_CONVERGENCE;
        case amc::ErrorCode::Format: return AMC_ERR_FORMAT;
        case amc::ErrorCode::Io: return AMC_ERR_IO;
    }
    return AMC_ERR_UNKNOWN;
}

template <typename Fn>
int guard(Fn&& fn) {
    try {
        fn();
        return AMC_OK;
    } catch (const amc::Error& e) {
        g_last_error = e.what();
        return map_code(e.code());
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return AMC_ERR_UNKNOWN;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return AMC_ERR_UNKNOWN;
    }
}

int fail_arg(const char* msg) {
    g_last_error = msg;
    return AMC_ERR_ARGUMENT;
}

amc::Scheme parse_label(const char* label) {
    if (!label) throw amc::Error(amc::ErrorCode::Argument, "label is null");
    auto s = amc::scheme_from_name(label);
    if (!s) {
        throw amc::Error(amc::ErrorCode::Argument,
                         std::string("unknown scheme '") + label +
                             "'; valid: " + amc::scheme_name_list());
    }
    return *s;
}

std::array<double, amc::kFeatureCount> to_array(const double* v) {
    std::array<double, amc::kFeatureCount> a{};
    for (size_t i = 0; i < amc::kFeatureCount; ++i) a[i] = v[i];
    return a;
}

amc::MatchPolicy to_policy(const amc_match_policy& p) {
    amc::MatchPolicy out;
    out.tolerance = to_array(p.tolerance);
    switch (p.miss_action) {
        case AMC_MISS_STRICT_MALICIOUS:
            out.miss_action = amc::MissAction::StrictMalicious;
            break;
        case AMC_MISS_CLASSIFY_FALLBACK:
            out.miss_action = amc::MissAction::ClassifyFallback;
            break;
        default:
            throw amc::Error(amc::ErrorCode::Argument, "bad miss_action value");
    }
    out.insert_on_classify = p.insert_on_classify != 0;
    return out;
}

void fill_match_out(const std::optional<amc::MatchResult>& r, int* found_out,
                    uint64_t* id_out, const char** label_out,
                    double* distance_out) {
    if (found_out) *found_out = r.has_value() ? 1 : 0;
    if (id_out) *id_out = r ? r->id : 0;
    if (label_out) *label_out = r ? amc::scheme_name(r->label) : nullptr;
    if (distance_out) *distance_out = r ? r->distance : 0.0;
}

}  // namespace

extern "C" {

const char* amc_version(void) { return "1.0.0"; }

const char* amc_last_error(void) { return g_last_error.c_str(); }

size_t amc_scheme_count(void) { return amc::kSchemeCount; }

const char* amc_scheme_name(size_t index) {
    if (index >= amc::kSchemeCount) return nullptr;
    return amc::scheme_name(amc::all_schemes()[index]);
}

size_t amc_feature_count(void) { return amc::kFeatureCount; }

const char* amc_feature_name(size_t index) {
    if (index >= amc::kFeatureCount) return nullptr;
    return amc::feature_names()[index];
}

void amc_synth_params_default(amc_synth_params* p) {
    if (!p) return;
    amc::SynthConfig c;
    p->sample_rate = c.sample_rate;
    p->carrier = c.carrier;
    p->message_freq = c.message_freq;
    p->num_samples = c.num_samples;
    p->am_depth = c.am_depth;
    p->fm_index = c.fm_index;
    p->symbol_rate = c.symbol_rate;
    p->fsk_deviation = c.fsk_deviation;
    p->rng_seed = c.rng_seed;
}

int amc_synth(const char* scheme, const amc_synth_params* p, amc_waveform** out) {
    if (!scheme || !p || !out) return fail_arg("amc_synth: null argument");
    return guard([&] {
        amc::SynthConfig c;
        c.sample_rate = p->sample_rate;
        c.carrier = p->carrier;
        c.message_freq = p->message_freq;
        c.num_samples = static_cast<size_t>(p->num_samples);
        c.am_depth = p->am_depth;
        c.fm_index = p->fm_index;
        c.symbol_rate = p->symbol_rate;
        c.fsk_deviation = p->fsk_deviation;
        c.rng_seed = p->rng_seed;
        *out = new amc_waveform{amc::synthesize(parse_label(scheme), c)};
    });
}

int amc_add_awgn(const amc_waveform* w, double snr_db, uint64_t seed,
                 amc_waveform** out) {
    if (!w || !out) return fail_arg("amc_add_awgn: null argument");
    return guard([&] { *out = new amc_waveform{amc::add_awgn(w->w, snr_db, seed)}; });
}

int amc_measure_snr(const amc_waveform* clean, const amc_waveform* noisy,
                    double* snr_db_out) {
    if (!clean || !noisy || !snr_db_out) {
        return fail_arg("amc_measure_snr: null argument");
    }
    return guard([&] { *snr_db_out = amc::measure_snr(clean->w, noisy->w); });
}

int amc_waveform_save(const amc_waveform* w, const char* path) {
    if (!w || !path) return fail_arg("amc_waveform_save: null argument");
    return guard([&] { amc::save_waveform(w->w, path); });
}

int amc_waveform_load(const char* path, amc_waveform** out) {
    if (!path || !out) return fail_arg("amc_waveform_load: null argument");
    return guard([&] { *out = new amc_waveform{amc::load_waveform(path)}; });
}

size_t amc_waveform_length(const amc_waveform* w) {
    return w ? w->w.samples.size() : 0;
}

const double* amc_waveform_samples(const amc_waveform* w) {
    return w ? w->w.samples.data() : nullptr;
}

double amc_waveform_sample_rate(const amc_waveform* w) {
    return w ? w->w.sample_rate : 0.0;
}

double amc_waveform_carrier(const amc_waveform* w) {
    return w ? w->w.carrier : 0.0;
}

double amc_waveform_snr_db(const amc_waveform* w) {
    return w ? w->w.snr_db : 0.0;
}

uint64_t amc_waveform_seed(const amc_waveform* w) { return w ? w->w.seed : 0; }

const char* amc_waveform_scheme(const amc_waveform* w) {
    return w ? amc::scheme_name(w->w.scheme) : nullptr;
}

void amc_waveform_free(amc_waveform* w) { delete w; }

void amc_feature_config_default(amc_feature_config* c) {
    if (!c) return;
    amc::FeatureConfig f;
    c->amp_threshold = f.amp_threshold;
    c->edge_trim = f.edge_trim;
}

int amc_extract(const amc_waveform* w, const amc_feature_config* cfg,
                double* features_out, int* mu42a_degenerate,
                int* mu42f_degenerate) {
    if (!w || !features_out) return fail_arg("amc_extract: null argument");
    return guard([&] {
        amc::FeatureConfig f;
        if (cfg) {
            f.amp_threshold = cfg->amp_threshold;
            f.edge_trim = static_cast<size_t>(cfg->edge_trim);
        }
        const amc::FeatureVector fv = amc::extract_all(w->w, f);
        const auto vals = fv.values();
        for (size_t i = 0; i < amc::kFeatureCount; ++i) features_out[i] = vals[i];
        if (mu42a_degenerate) *mu42a_degenerate = fv.mu42_a_degenerate ? 1 : 0;
        if (mu42f_degenerate) *mu42f_degenerate = fv.mu42_f_degenerate ? 1 : 0;
    });
}

int amc_dataset_create(amc_dataset** out) {
    if (!out) return fail_arg("amc_dataset_create: null argument");
    return guard([&] { *out = new amc_dataset{}; });
}

int amc_dataset_add_row(amc_dataset* ds, const double* features,
                        const char* label, double snr_db, uint64_t seed) {
    if (!ds || !features) return fail_arg("amc_dataset_add_row: null argument");
    return guard([&] {
        amc::DatasetRow r;
        r.features = amc::FeatureVector::from_values(to_array(features));
        r.label = parse_label(label);
        r.snr_db = snr_db;
        r.seed = seed;
        ds->ds.add(r);
    });
}

size_t amc_dataset_size(const amc_dataset* ds) { return ds ? ds->ds.size() : 0; }

int amc_dataset_row(const amc_dataset* ds, size_t index, double* features_out,
                    const char** label_out, double* snr_db_out,
                    uint64_t* seed_out) {
    if (!ds) return fail_arg("amc_dataset_row: null argument");
    if (index >= ds->ds.size()) return fail_arg("amc_dataset_row: index out of range");
    const amc::DatasetRow& r = ds->ds.rows[index];
    if (features_out) {
        const auto vals = r.features.values();
        for (size_t i = 0; i < amc::kFeatureCount; ++i) features_out[i] = vals[i];
    }
    if (label_out) *label_out = amc::scheme_name(r.label);
    if (snr_db_out) *snr_db_out = r.snr_db;
    if (seed_out) *seed_out = r.seed;
    return AMC_OK;
}

int amc_dataset_save_csv(const amc_dataset* ds, const char* path) {
    if (!ds || !path) return fail_arg("amc_dataset_save_csv: null argument");
    return guard([&] { amc::save_csv(ds->ds, path); });
}

int amc_dataset_load_csv(const char* path, amc_dataset** out) {
    if (!path || !out) return fail_arg("amc_dataset_load_csv: null argument");
    return guard([&] { *out = new amc_dataset{amc::load_csv(path)}; });
}

int amc_dataset_save_arff(const amc_dataset* ds, const char* path,
                          const char* relation) {
    if (!ds || !path) return fail_arg("amc_dataset_save_arff: null argument");
    return guard([&] {
        amc::save_arff(ds->ds, path, relation ? relation : "amc_features");
    });
}

int amc_dataset_load_arff(const char* path, amc_dataset** out) {
    if (!path || !out) return fail_arg("amc_dataset_load_arff: null argument");
    return guard([&] { *out = new amc_dataset{amc::load_arff(path)}; });
}

void amc_dataset_free(amc_dataset* ds) { delete ds; }

void amc_train_params_default(amc_train_params* p) {
    if (!p) return;
    amc::SmoConfig c;
    p->box_c = c.box_c;
    p->tol = c.tol;
    p->kernel_exponent = c.kernel.exponent;
    p->kernel_offset = c.kernel.offset;
    p->max_passes = c.max_passes;
    p->heuristic_seed = c.heuristic_seed;
}

int amc_train(const amc_dataset* ds, const amc_train_params* p, amc_model** out) {
    if (!ds || !p || !out) return fail_arg("amc_train: null argument");
    return guard([&] {
        amc::SmoConfig c;
        c.box_c = p->box_c;
        c.tol = p->tol;
        c.kernel.exponent = p->kernel_exponent;
        c.kernel.offset = p->kernel_offset;
        c.max_passes = static_cast<size_t>(p->max_passes);
        c.heuristic_seed = p->heuristic_seed;
        *out = new amc_model{amc::train_multiclass(ds->ds, c)};
    });
}

int amc_model_save(const amc_model* m, const char* path) {
    if (!m || !path) return fail_arg("amc_model_save: null argument");
    return guard([&] { amc::save_model(m->m, path); });
}

int amc_model_load(const char* path, amc_model** out) {
    if (!path || !out) return fail_arg("amc_model_load: null argument");
    return guard([&] { *out = new amc_model{amc::load_model(path)}; });
}

size_t amc_model_class_count(const amc_model* m) {
    return m ? m->m.classes.size() : 0;
}

const char* amc_model_class_name(const amc_model* m, size_t index) {
    if (!m || index >= m->m.classes.size()) return nullptr;
    return amc::scheme_name(m->m.classes[index]);
}

size_t amc_model_pair_count(const amc_model* m) {
    return m ? m->m.pair_models.size() : 0;
}

int amc_model_pair_info(const amc_model* m, size_t index,
                        const char** positive_out, const char** negative_out,
                        size_t* support_count_out) {
    if (!m) return fail_arg("amc_model_pair_info: null argument");
    if (index >= m->m.pair_models.size()) {
        return fail_arg("amc_model_pair_info: index out of range");
    }
    const amc::BinarySvmModel& b = m->m.pair_models[index];
    if (positive_out) *positive_out = amc::scheme_name(b.positive_class);
    if (negative_out) *negative_out = amc::scheme_name(b.negative_class);
    if (support_count_out) *support_count_out = b.support_count();
    return AMC_OK;
}

int amc_predict(const amc_model* m, const double* features,
                const char** label_out) {
    return amc_predict_detail(m, features, label_out, nullptr, nullptr);
}

int amc_predict_detail(const amc_model* m, const double* features,
                       const char** label_out, int* votes_out,
                       double* margins_out) {
    if (!m || !features || !label_out) {
        return fail_arg("amc_predict: null argument");
    }
    return guard([&] {
        const auto fv = amc::FeatureVector::from_values(to_array(features));
        amc::VoteDetail detail;
        const bool want = votes_out || margins_out;
        const amc::Scheme s =
            amc::predict_multiclass(m->m, fv, want ? &detail : nullptr);
        *label_out = amc::scheme_name(s);
        if (want) {
            for (size_t i = 0; i < detail.classes.size(); ++i) {
                if (votes_out) votes_out[i] = detail.votes[i];
                if (margins_out) margins_out[i] = detail.margin_sums[i];
            }
        }
    });
}

void amc_model_free(amc_model* m) { delete m; }

int amc_store_create(const double* epsilon, amc_store** out) {
    if (!epsilon || !out) return fail_arg("amc_store_create: null argument");
    return guard([&] {
        *out = new amc_store{amc::FeatureStore(to_array(epsilon))};
    });
}

int amc_store_load(const char* path, amc_store** out) {
    if (!path || !out) return fail_arg("amc_store_load: null argument");
    return guard([&] { *out = new amc_store{amc::FeatureStore::load(path)}; });
}

int amc_store_save(const amc_store* s, const char* path) {
    if (!s || !path) return fail_arg("amc_store_save: null argument");
    return guard([&] { s->s.persist(path); });
}

size_t amc_store_count(const amc_store* s) { return s ? s->s.size() : 0; }

int amc_store_epsilon(const amc_store* s, double* epsilon_out) {
    if (!s || !epsilon_out) return fail_arg("amc_store_epsilon: null argument");
    const auto& e = s->s.epsilon();
    for (size_t i = 0; i < amc::kFeatureCount; ++i) epsilon_out[i] = e[i];
    return AMC_OK;
}

int amc_store_insert(amc_store* s, const char* label, const double* features,
                     double snr_db, int64_t created_at, uint64_t source_seed,
                     uint64_t* id_out) {
    if (!s || !features) return fail_arg("amc_store_insert: null argument");
    return guard([&] {
        amc::FeatureRecord r;
        r.label = parse_label(label);
        r.features = amc::FeatureVector::from_values(to_array(features));
        r.snr_db = snr_db;
        r.created_at = created_at;
        r.source_seed = source_seed;
        const uint64_t id = s->s.insert(r);
        if (id_out) *id_out = id;
    });
}

int amc_store_record(const amc_store* s, uint64_t id, double* features_out,
                     const char** label_out, double* snr_db_out,
                     int64_t* created_at_out, uint64_t* seed_out,
                     int* found_out) {
    if (!s) return fail_arg("amc_store_record: null argument");
    const auto r = s->s.get(id);
    if (found_out) *found_out = r.has_value() ? 1 : 0;
    if (!r) return AMC_OK;
    if (features_out) {
        const auto vals = r->features.values();
        for (size_t i = 0; i < amc::kFeatureCount; ++i) features_out[i] = vals[i];
    }
    if (label_out) *label_out = amc::scheme_name(r->label);
    if (snr_db_out) *snr_db_out = r->snr_db;
    if (created_at_out) *created_at_out = r->created_at;
    if (seed_out) *seed_out = r->source_seed;
    return AMC_OK;
}

int amc_store_match(const amc_store* s, const double* features,
                    const amc_match_policy* policy, int* found_out,
                    uint64_t* id_out, const char** label_out,
                    double* distance_out) {
    if (!s || !features || !policy) return fail_arg("amc_store_match: null argument");
    return guard([&] {
        const auto r = s->s.match(
            amc::FeatureVector::from_values(to_array(features)), to_policy(*policy));
        fill_match_out(r, found_out, id_out, label_out, distance_out);
    });
}

int amc_store_scan_match(const amc_store* s, const double* features,
                         const amc_match_policy* policy, int* found_out,
                         uint64_t* id_out, const char** label_out,
                         double* distance_out) {
    if (!s || !features || !policy) {
        return fail_arg("amc_store_scan_match: null argument");
    }
    return guard([&] {
        const auto r = s->s.scan_match(
            amc::FeatureVector::from_values(to_array(features)), to_policy(*policy));
        fill_match_out(r, found_out, id_out, label_out, distance_out);
    });
}

int amc_classify_pipeline(amc_store* s, const amc_model* m,
                          const amc_waveform* w, const amc_match_policy* policy,
                          const amc_feature_config* fcfg, amc_outcome* out) {
    if (!s || !m || !w || !policy || !out) {
        return fail_arg("amc_classify_pipeline: null argument");
    }
    return guard([&] {
        amc::FeatureConfig f;
        if (fcfg) {
            f.amp_threshold = fcfg->amp_threshold;
            f.edge_trim = static_cast<size_t>(fcfg->edge_trim);
        }
        const amc::ClassificationOutcome oc =
            amc::classify_pipeline(s->s, m->m, w->w, to_policy(*policy), f);
        switch (oc.kind) {
            case amc::OutcomeKind::DbHit: out->kind = AMC_OUTCOME_DB_HIT; break;
            case amc::OutcomeKind::Classifier: out->kind = AMC_OUTCOME_CLASSIFIER; break;
            case amc::OutcomeKind::Malicious: out->kind = AMC_OUTCOME_MALICIOUS; break;
        }
        out->label = oc.label ? amc::scheme_name(*oc.label) : nullptr;
        out->matched_id = oc.matched_id.value_or(0);
        out->elapsed_ns = oc.elapsed_ns;
    });
}

int amc_derive_tolerances(const amc_dataset* ds, double factor,
                          double* tolerance_out) {
    if (!ds || !tolerance_out) return fail_arg("amc_derive_tolerances: null argument");
    return guard([&] {
        const auto tol = amc::derive_tolerances(ds->ds, factor);
        for (size_t i = 0; i < amc::kFeatureCount; ++i) tolerance_out[i] = tol[i];
    });
}

const char* amc_outcome_kind_name(int kind) {
    switch (kind) {
        case AMC_OUTCOME_DB_HIT: return "DB_HIT";
        case AMC_OUTCOME_CLASSIFIER: return "CLASSIFIER";
        case AMC_OUTCOME_MALICIOUS: return "MALICIOUS";
    }
    return "?";
}

void amc_store_free(amc_store* s) { delete s; }

}  // extern "C"
