#ifndef AMC_H
#define AMC_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. Every fallible call returns one of these; the last
 * failure message is kept per thread and read via amc_last_error. */
enum {
    AMC_OK = 0,
    AMC_ERR_ARGUMENT = 1,
    AMC_ERR_CONFIG = 2,
    AMC_ERR_SHAPE = 3,
    AMC_ERR_DEGENERATE = 4,
    AMC_ERR_EMPTY_MASK = 5,
    AMC_ERR_NUMERIC = 6,
    AMC_ERR_INSUFFICIENT_DATA = 7,
    AMC_ERR_CONVERGENCE = 8,
    AMC_ERR_FORMAT = 9,
    AMC_ERR_IO = 10,
    AMC_ERR_UNKNOWN = 99
};

#define AMC_FEATURE_COUNT 9

const char* amc_version(void);
const char* amc_last_error(void);

/* Scheme and feature name tables, fixed canonical order. Returned
 * strings are static. */
size_t amc_scheme_count(void);
const char* amc_scheme_name(size_t index);
size_t amc_feature_count(void);
const char* amc_feature_name(size_t index);

/* ---- waveforms ---- */

typedef struct amc_waveform amc_waveform;

typedef struct amc_synth_params {
    double sample_rate;
    double carrier;
    double message_freq;
    uint64_t num_samples;
    double am_depth;
    double fm_index;
    double symbol_rate;
    double fsk_deviation;
    uint64_t rng_seed;
} amc_synth_params;

void amc_synth_params_default(amc_synth_params* p);

int amc_synth(const char* scheme, const amc_synth_params* p, amc_waveform** out);
int amc_add_awgn(const amc_waveform* w, double snr_db, uint64_t seed,
                 amc_waveform** out);
int amc_measure_snr(const amc_waveform* clean, const amc_waveform* noisy,
                    double* snr_db_out);

int amc_waveform_save(const amc_waveform* w, const char* path);
int amc_waveform_load(const char* path, amc_waveform** out);

size_t amc_waveform_length(const amc_waveform* w);
const double* amc_waveform_samples(const amc_waveform* w);
double amc_waveform_sample_rate(const amc_waveform* w);
double amc_waveform_carrier(const amc_waveform* w);
double amc_waveform_snr_db(const amc_waveform* w);
uint64_t amc_waveform_seed(const amc_waveform* w);
const char* amc_waveform_scheme(const amc_waveform* w);

void amc_waveform_free(amc_waveform* w);

/* ---- feature extraction ---- */

typedef struct amc_feature_config {
    double amp_threshold;
    uint64_t edge_trim;
} amc_feature_config;

void amc_feature_config_default(amc_feature_config* c);

/* features_out has AMC_FEATURE_COUNT slots in canonical order. The two
 * degenerate flags report kurtosis guard hits; pass NULL to ignore. */
int amc_extract(const amc_waveform* w, const amc_feature_config* cfg,
                double* features_out, int* mu42a_degenerate,
                int* mu42f_degenerate);

/* ---- labeled datasets (CSV / ARFF) ---- */

typedef struct amc_dataset amc_dataset;

int amc_dataset_create(amc_dataset** out);
int amc_dataset_add_row(amc_dataset* ds, const double* features,
                        const char* label, double snr_db, uint64_t seed);
size_t amc_dataset_size(const amc_dataset* ds);
int amc_dataset_row(const amc_dataset* ds, size_t index, double* features_out,
                    const char** label_out, double* snr_db_out,
                    uint64_t* seed_out);
int amc_dataset_save_csv(const amc_dataset* ds, const char* path);
int amc_dataset_load_csv(const char* path, amc_dataset** out);
int amc_dataset_save_arff(const amc_dataset* ds, const char* path,
                          const char* relation);
int amc_dataset_load_arff(const char* path, amc_dataset** out);
void amc_dataset_free(amc_dataset* ds);

/* ---- SVM training and prediction ---- */

typedef struct amc_model amc_model;

typedef struct amc_train_params {
    double box_c;
    double tol;
    int kernel_exponent;
    double kernel_offset;
    uint64_t max_passes;
    uint64_t heuristic_seed;
} amc_train_params;

void amc_train_params_default(amc_train_params* p);

int amc_train(const amc_dataset* ds, const amc_train_params* p, amc_model** out);
int amc_model_save(const amc_model* m, const char* path);
int amc_model_load(const char* path, amc_model** out);

size_t amc_model_class_count(const amc_model* m);
const char* amc_model_class_name(const amc_model* m, size_t index);
size_t amc_model_pair_count(const amc_model* m);
int amc_model_pair_info(const amc_model* m, size_t index,
                        const char** positive_out, const char** negative_out,
                        size_t* support_count_out);

int amc_predict(const amc_model* m, const double* features,
                const char** label_out);
/* votes_out / margins_out have amc_model_class_count slots; NULL skips. */
int amc_predict_detail(const amc_model* m, const double* features,
                       const char** label_out, int* votes_out,
                       double* margins_out);

void amc_model_free(amc_model* m);

/* ---- feature store ---- */

typedef struct amc_store amc_store;

enum { AMC_MISS_STRICT_MALICIOUS = 0, AMC_MISS_CLASSIFY_FALLBACK = 1 };
enum { AMC_OUTCOME_DB_HIT = 0, AMC_OUTCOME_CLASSIFIER = 1, AMC_OUTCOME_MALICIOUS = 2 };

typedef struct amc_match_policy {
    double tolerance[AMC_FEATURE_COUNT];
    int miss_action;
    int insert_on_classify;
} amc_match_policy;

typedef struct amc_outcome {
    int kind;
    const char* label;   /* NULL when no label applies */
    uint64_t matched_id; /* 0 when no record matched */
    int64_t elapsed_ns;
} amc_outcome;

int amc_store_create(const double* epsilon, amc_store** out);
int amc_store_load(const char* path, amc_store** out);
int amc_store_save(const amc_store* s, const char* path);
size_t amc_store_count(const amc_store* s);
int amc_store_epsilon(const amc_store* s, double* epsilon_out);

/* created_at 0 stamps the current time; id_out receives the new id. */
int amc_store_insert(amc_store* s, const char* label, const double* features,
                     double snr_db, int64_t created_at, uint64_t source_seed,
                     uint64_t* id_out);
int amc_store_record(const amc_store* s, uint64_t id, double* features_out,
                     const char** label_out, double* snr_db_out,
                     int64_t* created_at_out, uint64_t* seed_out, int* found_out);

int amc_store_match(const amc_store* s, const double* features,
                    const amc_match_policy* policy, int* found_out,
                    uint64_t* id_out, const char** label_out,
                    double* distance_out);
int amc_store_scan_match(const amc_store* s, const double* features,
                         const amc_match_policy* policy, int* found_out,
                         uint64_t* id_out, const char** label_out,
                         double* distance_out);

int amc_classify_pipeline(amc_store* s, const amc_model* m,
                          const amc_waveform* w, const amc_match_policy* policy,
                          const amc_feature_config* fcfg, amc_outcome* out);

/* Per-feature factor * pooled within-class std over the dataset,
 * floored at 1e-9. */
int amc_derive_tolerances(const amc_dataset* ds, double factor,
                          double* tolerance_out);

const char* amc_outcome_kind_name(int kind);

void amc_store_free(amc_store* s);

#ifdef __cplusplus
}
#endif

#endif /* AMC_H */
