// amc: modulation-classification toolkit front end. Talks to the core
// library strictly through the C API in amc.h.

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "amc.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// ---- plumbing ----------------------------------------------------------

struct ApiError {
    int code;
    std::string message;
};

struct UsageError {
    std::string message;
};

void check(int status) {
    if (status != AMC_OK) throw ApiError{status, amc_last_error()};
}

int exit_for_api(int code) {
    switch (code) {
        case AMC_OK: return 0;
        case AMC_ERR_ARGUMENT:
        case AMC_ERR_CONFIG: return 1;
        case AMC_ERR_CONVERGENCE: return 3;
        default: return 2;  // data / format / io / numeric
    }
}

using WavePtr = std::unique_ptr<amc_waveform, decltype(&amc_waveform_free)>;
using DatasetPtr = std::unique_ptr<amc_dataset, decltype(&amc_dataset_free)>;
using ModelPtr = std::unique_ptr<amc_model, decltype(&amc_model_free)>;
using StorePtr = std::unique_ptr<amc_store, decltype(&amc_store_free)>;

WavePtr wrap(amc_waveform* p) { return WavePtr(p, &amc_waveform_free); }
DatasetPtr wrap(amc_dataset* p) { return DatasetPtr(p, &amc_dataset_free); }
ModelPtr wrap(amc_model* p) { return ModelPtr(p, &amc_model_free); }
StorePtr wrap(amc_store* p) { return StorePtr(p, &amc_store_free); }

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string gshort(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

std::string timestamp_utc() {
    const std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    out.erase(std::remove(out.begin(), out.end(), std::string{}), out.end());
    return out;
}

double parse_num(const std::string& tok, const char* what) {
    try {
        size_t pos = 0;
        const double v = std::stod(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw UsageError{std::string("bad ") + what + " value '" + tok + "'"};
    }
}

std::vector<double> parse_num_list(const std::string& s, const char* what) {
    std::vector<double> out;
    for (const auto& tok : split_csv(s)) out.push_back(parse_num(tok, what));
    if (out.empty()) throw UsageError{std::string("empty ") + what + " list"};
    return out;
}

std::vector<std::string> parse_scheme_list(const std::string& s) {
    std::vector<std::string> names;
    for (size_t i = 0; i < amc_scheme_count(); ++i) names.push_back(amc_scheme_name(i));
    if (s == "all") return names;
    std::vector<std::string> out;
    for (const auto& tok : split_csv(s)) {
        if (std::find(names.begin(), names.end(), tok) == names.end()) {
            std::string valid;
            for (const auto& n : names) valid += (valid.empty() ? "" : ",") + n;
            throw UsageError{"unknown scheme '" + tok + "'; valid: " + valid};
        }
        out.push_back(tok);
    }
    if (out.empty()) throw UsageError{"empty scheme list"};
    return out;
}

std::array<double, AMC_FEATURE_COUNT> parse_tolerance(const std::string& s) {
    const auto vals = parse_num_list(s, "tolerance");
    std::array<double, AMC_FEATURE_COUNT> out{};
    if (vals.size() == 1) {
        out.fill(vals[0]);
    } else if (vals.size() == AMC_FEATURE_COUNT) {
        std::copy(vals.begin(), vals.end(), out.begin());
    } else {
        throw UsageError{"tolerance needs 1 or 9 comma-separated values"};
    }
    for (double v : out) {
        if (!(v > 0.0)) throw UsageError{"tolerance values must be > 0"};
    }
    return out;
}

void write_json(const std::string& path, const json& j) {
    std::ofstream f(path);
    if (!f) throw ApiError{AMC_ERR_IO, "cannot write " + path};
    f << j.dump(2) << "\n";
    if (!f) throw ApiError{AMC_ERR_IO, "write failed: " + path};
}

json manifest_base(const std::string& command) {
    json j;
    j["tool"] = "amc";
    j["version"] = amc_version();
    j["command"] = command;
    j["created"] = timestamp_utc();
    return j;
}

// Inputs may be waveform files or manifest JSONs whose outputs/items
// list waveform files.
std::vector<std::string> expand_inputs(const std::vector<std::string>& in) {
    std::vector<std::string> out;
    for (const auto& p : in) {
        if (p.size() > 5 && p.substr(p.size() - 5) == ".json") {
            std::ifstream f(p);
            if (!f) throw ApiError{AMC_ERR_IO, "cannot read " + p};
            json j;
            try {
                f >> j;
            } catch (const std::exception& e) {
                throw ApiError{AMC_ERR_FORMAT, p + ": " + e.what()};
            }
            if (j.contains("items") && j["items"].is_array()) {
                for (const auto& it : j["items"]) {
                    out.push_back(it.at("path").get<std::string>());
                }
            } else if (j.contains("outputs") && j["outputs"].is_array()) {
                for (const auto& it : j["outputs"]) out.push_back(it.get<std::string>());
            } else {
                throw ApiError{AMC_ERR_FORMAT, p + ": no items/outputs list"};
            }
        } else {
            out.push_back(p);
        }
    }
    if (out.empty()) throw UsageError{"no input waveforms"};
    return out;
}

// ---- shared option blocks ---------------------------------------------

struct SynthOpts {
    amc_synth_params p{};
    void attach(CLI::App* sub) {
        amc_synth_params_default(&p);
        sub->add_option("--sample-rate", p.sample_rate, "sampling rate, Hz");
        sub->add_option("--carrier", p.carrier, "carrier frequency, Hz");
        sub->add_option("--message-freq", p.message_freq, "analog message tone, Hz");
        sub->add_option("--num-samples", p.num_samples, "samples per realization");
        sub->add_option("--am-depth", p.am_depth, "AM modulation depth Ka");
        sub->add_option("--fm-index", p.fm_index, "FM modulation index");
        sub->add_option("--symbol-rate", p.symbol_rate, "digital symbol rate, baud");
        sub->add_option("--fsk-deviation", p.fsk_deviation, "FSK tone deviation, Hz");
    }
};

struct FeatureOpts {
    amc_feature_config c{};
    void attach(CLI::App* sub) {
        amc_feature_config_default(&c);
        sub->add_option("--amp-threshold", c.amp_threshold,
                        "weak-segment mask threshold over normalized amplitude");
        sub->add_option("--edge-trim", c.edge_trim, "samples dropped at each edge");
    }
};

struct TrainOpts {
    amc_train_params p{};
    void attach(CLI::App* sub) {
        amc_train_params_default(&p);
        sub->add_option("--box-c", p.box_c, "SMO box constraint C");
        sub->add_option("--tol", p.tol, "KKT tolerance");
        sub->add_option("--degree", p.kernel_exponent, "polynomial kernel degree");
        sub->add_option("--coef0", p.kernel_offset, "polynomial kernel offset");
        sub->add_option("--max-passes", p.max_passes, "outer-loop iteration cap");
        sub->add_option("--heuristic-seed", p.heuristic_seed,
                        "seed of the SMO fallback scans");
    }
};

json synth_json(const amc_synth_params& p) {
    return json{{"sample_rate", p.sample_rate},
                {"carrier", p.carrier},
                {"message_freq", p.message_freq},
                {"num_samples", p.num_samples},
                {"am_depth", p.am_depth},
                {"fm_index", p.fm_index},
                {"symbol_rate", p.symbol_rate},
                {"fsk_deviation", p.fsk_deviation}};
}

json feature_json(const amc_feature_config& c) {
    return json{{"amp_threshold", c.amp_threshold}, {"edge_trim", c.edge_trim}};
}

json train_json(const amc_train_params& p) {
    return json{{"box_c", p.box_c},
                {"tol", p.tol},
                {"degree", p.kernel_exponent},
                {"coef0", p.kernel_offset},
                {"max_passes", p.max_passes},
                {"heuristic_seed", p.heuristic_seed}};
}

// ---- synth -------------------------------------------------------------

struct SynthCmd {
    SynthOpts synth;
    std::string schemes = "all";
    std::string snrs = "15";
    size_t count = 10;
    uint64_t seed = 1;
    uint64_t noise_offset = 1000000007ull;
    std::string out_dir = "waveforms";
    std::string manifest;
};

int run_synth(const SynthCmd& o) {
    const auto schemes = parse_scheme_list(o.schemes);
    const auto snrs = parse_num_list(o.snrs, "snr");
    if (o.count == 0) throw UsageError{"--count must be >= 1"};
    fs::create_directories(o.out_dir);

    json items = json::array();
    size_t k = 0;
    for (const auto& scheme : schemes) {
        for (double snr : snrs) {
            for (size_t i = 0; i < o.count; ++i, ++k) {
                const uint64_t sym_seed = o.seed + k;
                amc_synth_params p = o.synth.p;
                p.rng_seed = sym_seed;
                amc_waveform* raw = nullptr;
                check(amc_synth(scheme.c_str(), &p, &raw));
                WavePtr w = wrap(raw);
                uint64_t noise_seed = 0;
                if (std::isfinite(snr)) {
                    noise_seed = sym_seed + o.noise_offset;
                    amc_waveform* noisy = nullptr;
                    check(amc_add_awgn(w.get(), snr, noise_seed, &noisy));
                    w = wrap(noisy);
                }
                char name[128];
                std::snprintf(name, sizeof(name), "%s_snr%s_%04zu.amcwav",
                              scheme.c_str(), gshort(snr).c_str(), i);
                const std::string path = (fs::path(o.out_dir) / name).string();
                check(amc_waveform_save(w.get(), path.c_str()));
                json item{{"path", path},
                          {"scheme", scheme},
                          {"snr_db", std::isfinite(snr) ? json(snr) : json("inf")},
                          {"symbol_seed", sym_seed},
                          {"index", i}};
                if (std::isfinite(snr)) item["noise_seed"] = noise_seed;
                items.push_back(std::move(item));
            }
        }
    }

    json man = manifest_base("synth");
    man["config"] = {{"synth", synth_json(o.synth.p)},
                     {"schemes", schemes},
                     {"snrs", o.snrs},
                     {"count", o.count},
                     {"seed", o.seed},
                     {"noise_offset", o.noise_offset}};
    man["items"] = items;
    const std::string man_path =
        o.manifest.empty() ? (fs::path(o.out_dir) / "manifest.json").string()
                           : o.manifest;
    write_json(man_path, man);
    std::printf("wrote %zu waveforms to %s (manifest %s)\n", k, o.out_dir.c_str(),
                man_path.c_str());
    return 0;
}

// ---- extract -----------------------------------------------------------

struct ExtractCmd {
    FeatureOpts feat;
    std::vector<std::string> inputs;
    std::string csv_out;
    std::string arff_out;
    std::string relation = "amc_features";
    std::string manifest;
};

int run_extract(const ExtractCmd& o) {
    if (o.csv_out.empty() && o.arff_out.empty()) {
        throw UsageError{"need --csv and/or --arff output path"};
    }
    const auto paths = expand_inputs(o.inputs);
    amc_dataset* raw = nullptr;
    check(amc_dataset_create(&raw));
    DatasetPtr ds = wrap(raw);

    json skipped = json::array();
    for (const auto& path : paths) {
        amc_waveform* wr = nullptr;
        check(amc_waveform_load(path.c_str(), &wr));
        WavePtr w = wrap(wr);
        const double* s = amc_waveform_samples(w.get());
        const size_t n = amc_waveform_length(w.get());
        double power = 0.0;
        for (size_t i = 0; i < n; ++i) power += s[i] * s[i];
        if (!(power > 0.0)) {
            std::fprintf(stderr, "warning: skipping %s (zero power), seed %llu\n",
                         path.c_str(),
                         static_cast<unsigned long long>(amc_waveform_seed(w.get())));
            skipped.push_back(
                {{"path", path}, {"seed", amc_waveform_seed(w.get())}});
            continue;
        }
        double f[AMC_FEATURE_COUNT];
        check(amc_extract(w.get(), &o.feat.c, f, nullptr, nullptr));
        check(amc_dataset_add_row(ds.get(), f, amc_waveform_scheme(w.get()),
                                  amc_waveform_snr_db(w.get()),
                                  amc_waveform_seed(w.get())));
    }

    json outputs = json::array();
    if (!o.csv_out.empty()) {
        check(amc_dataset_save_csv(ds.get(), o.csv_out.c_str()));
        outputs.push_back(o.csv_out);
    }
    if (!o.arff_out.empty()) {
        check(amc_dataset_save_arff(ds.get(), o.arff_out.c_str(), o.relation.c_str()));
        outputs.push_back(o.arff_out);
    }

    json man = manifest_base("extract");
    man["config"] = {{"features", feature_json(o.feat.c)}, {"relation", o.relation}};
    man["inputs"] = paths;
    man["outputs"] = outputs;
    man["rows"] = amc_dataset_size(ds.get());
    man["skipped"] = skipped;
    const std::string primary = o.csv_out.empty() ? o.arff_out : o.csv_out;
    const std::string man_path =
        o.manifest.empty() ? primary + ".manifest.json" : o.manifest;
    write_json(man_path, man);
    std::printf("extracted %zu rows (%zu skipped) -> %s\n",
                amc_dataset_size(ds.get()), skipped.size(), primary.c_str());
    return 0;
}

// ---- train -------------------------------------------------------------

struct TrainCmd {
    TrainOpts train;
    std::string in;
    std::string model_out = "model.amcsvm";
    std::string manifest;
};

DatasetPtr load_dataset(const std::string& path) {
    amc_dataset* raw = nullptr;
    const bool arff =
        path.size() > 5 && path.substr(path.size() - 5) == ".arff";
    if (arff) {
        check(amc_dataset_load_arff(path.c_str(), &raw));
    } else {
        check(amc_dataset_load_csv(path.c_str(), &raw));
    }
    return wrap(raw);
}

int run_train(const TrainCmd& o) {
    if (o.in.empty()) throw UsageError{"need --in features file (csv or arff)"};
    DatasetPtr ds = load_dataset(o.in);
    amc_model* mr = nullptr;
    check(amc_train(ds.get(), &o.train.p, &mr));
    ModelPtr m = wrap(mr);

    std::printf("trained %zu-class model from %zu rows, %zu pair models\n",
                amc_model_class_count(m.get()), amc_dataset_size(ds.get()),
                amc_model_pair_count(m.get()));
    for (size_t i = 0; i < amc_model_pair_count(m.get()); ++i) {
        const char* pos = nullptr;
        const char* neg = nullptr;
        size_t sv = 0;
        check(amc_model_pair_info(m.get(), i, &pos, &neg, &sv));
        std::printf("  pair %-4s vs %-4s: %zu support vectors\n", pos, neg, sv);
    }
    check(amc_model_save(m.get(), o.model_out.c_str()));

    json man = manifest_base("train");
    man["config"] = {{"train", train_json(o.train.p)}};
    man["inputs"] = {o.in};
    man["outputs"] = {o.model_out};
    man["rows"] = amc_dataset_size(ds.get());
    man["classes"] = amc_model_class_count(m.get());
    const std::string man_path =
        o.manifest.empty() ? o.model_out + ".manifest.json" : o.manifest;
    write_json(man_path, man);
    std::printf("model -> %s\n", o.model_out.c_str());
    return 0;
}

// ---- classify ----------------------------------------------------------

struct ClassifyCmd {
    FeatureOpts feat;
    std::string model;
    std::string store;
    std::string store_out;
    std::vector<std::string> inputs;
    std::string tolerance;
    std::string miss_action = "fallback";
    bool insert_on_classify = false;
    bool create_store = false;
    std::string manifest;
};

int run_classify(const ClassifyCmd& o) {
    if (o.model.empty()) throw UsageError{"need --model"};
    if (o.store.empty()) throw UsageError{"need --store"};
    amc_model* mr = nullptr;
    check(amc_model_load(o.model.c_str(), &mr));
    ModelPtr m = wrap(mr);

    StorePtr store = wrap(static_cast<amc_store*>(nullptr));
    if (fs::exists(o.store)) {
        amc_store* sr = nullptr;
        check(amc_store_load(o.store.c_str(), &sr));
        store = wrap(sr);
    } else if (o.create_store) {
        if (o.tolerance.empty()) {
            throw UsageError{"--create-store needs --tolerance for the store epsilon"};
        }
        const auto eps = parse_tolerance(o.tolerance);
        amc_store* sr = nullptr;
        check(amc_store_create(eps.data(), &sr));
        store = wrap(sr);
    } else {
        throw ApiError{AMC_ERR_IO, "store not found: " + o.store +
                                       " (use --create-store to start one)"};
    }

    amc_match_policy policy{};
    if (!o.tolerance.empty()) {
        const auto tol = parse_tolerance(o.tolerance);
        std::copy(tol.begin(), tol.end(), policy.tolerance);
    } else {
        check(amc_store_epsilon(store.get(), policy.tolerance));
    }
    if (o.miss_action == "strict") {
        policy.miss_action = AMC_MISS_STRICT_MALICIOUS;
    } else if (o.miss_action == "fallback") {
        policy.miss_action = AMC_MISS_CLASSIFY_FALLBACK;
    } else {
        throw UsageError{"--miss-action must be strict or fallback"};
    }
    policy.insert_on_classify = o.insert_on_classify ? 1 : 0;

    const auto paths = expand_inputs(o.inputs);
    size_t hits = 0, classified = 0, malicious = 0;
    for (size_t i = 0; i < paths.size(); ++i) {
        amc_waveform* wr = nullptr;
        check(amc_waveform_load(paths[i].c_str(), &wr));
        WavePtr w = wrap(wr);
        amc_outcome oc{};
        check(amc_classify_pipeline(store.get(), m.get(), w.get(), &policy,
                                    &o.feat.c, &oc));
        switch (oc.kind) {
            case AMC_OUTCOME_DB_HIT: ++hits; break;
            case AMC_OUTCOME_CLASSIFIER: ++classified; break;
            default: ++malicious; break;
        }
        char idbuf[24] = "-";
        if (oc.kind == AMC_OUTCOME_DB_HIT) {
            std::snprintf(idbuf, sizeof(idbuf), "%llu",
                          static_cast<unsigned long long>(oc.matched_id));
        }
        std::printf("%zu %s %s %s %lld\n", i, amc_outcome_kind_name(oc.kind),
                    oc.label ? oc.label : "-", idbuf,
                    static_cast<long long>(oc.elapsed_ns));
    }

    const std::string store_out = o.store_out.empty() ? o.store : o.store_out;
    const bool store_dirty = o.insert_on_classify && classified > 0;
    if (store_dirty || (o.create_store && !fs::exists(o.store))) {
        check(amc_store_save(store.get(), store_out.c_str()));
    }

    json man = manifest_base("classify");
    man["config"] = {{"features", feature_json(o.feat.c)},
                     {"miss_action", o.miss_action},
                     {"insert_on_classify", o.insert_on_classify},
                     {"model", o.model},
                     {"store", o.store}};
    json tol = json::array();
    for (double v : policy.tolerance) tol.push_back(v);
    man["config"]["tolerance"] = tol;
    man["inputs"] = paths;
    man["outputs"] = json::array();
    if (store_dirty || o.create_store) man["outputs"].push_back(store_out);
    man["counts"] = {{"db_hit", hits},
                     {"classifier", classified},
                     {"malicious", malicious},
                     {"store_records", amc_store_count(store.get())}};
    const std::string man_path =
        o.manifest.empty() ? "classify.manifest.json" : o.manifest;
    write_json(man_path, man);
    std::fprintf(stderr, "db_hit %zu  classifier %zu  malicious %zu\n", hits,
                 classified, malicious);
    return 0;
}

// ---- bench-accuracy ----------------------------------------------------

struct BenchAccCmd {
    SynthOpts synth;
    FeatureOpts feat;
    TrainOpts train;
    std::string snrs = "5,15,25";
    size_t train_count = 100;
    size_t test_count = 100;
    uint64_t train_seed = 10000;
    uint64_t train_noise_seed = 20000000;
    uint64_t test_seed = 5000000;
    uint64_t test_noise_seed = 25000000;
    std::string out_dir = "bench_accuracy";
    std::string manifest;
};

// Per-class seeds: symbols at base + class*1000 + i, noise at
// noise_base + class*100000 + i. Collision-free for count <= 1000.
DatasetPtr make_labeled_set(const amc_synth_params& base,
                            const amc_feature_config& fcfg, double snr,
                            size_t count, uint64_t sym_base,
                            uint64_t noise_base) {
    amc_dataset* raw = nullptr;
    check(amc_dataset_create(&raw));
    DatasetPtr ds = wrap(raw);
    for (size_t ci = 0; ci < amc_scheme_count(); ++ci) {
        const char* scheme = amc_scheme_name(ci);
        for (size_t i = 0; i < count; ++i) {
            amc_synth_params p = base;
            p.rng_seed = sym_base + ci * 1000 + i;
            amc_waveform* wr = nullptr;
            check(amc_synth(scheme, &p, &wr));
            WavePtr w = wrap(wr);
            if (std::isfinite(snr)) {
                amc_waveform* nr = nullptr;
                check(amc_add_awgn(w.get(), snr, noise_base + ci * 100000 + i, &nr));
                w = wrap(nr);
            }
            double f[AMC_FEATURE_COUNT];
            check(amc_extract(w.get(), &fcfg, f, nullptr, nullptr));
            check(amc_dataset_add_row(ds.get(), f, scheme, snr, p.rng_seed));
        }
    }
    return ds;
}

struct Confusion {
    std::vector<std::string> classes;
    std::vector<std::vector<size_t>> counts;

    explicit Confusion(std::vector<std::string> cls)
        : classes(std::move(cls)),
          counts(classes.size(), std::vector<size_t>(classes.size(), 0)) {}

    size_t index(const std::string& name) const {
        const auto it = std::find(classes.begin(), classes.end(), name);
        return static_cast<size_t>(it - classes.begin());
    }

    size_t total() const {
        size_t t = 0;
        for (const auto& row : counts)
            for (size_t v : row) t += v;
        return t;
    }

    size_t trace() const {
        size_t t = 0;
        for (size_t i = 0; i < classes.size(); ++i) t += counts[i][i];
        return t;
    }

    // (TP+TN)/(TP+TN+FP+FN) for one class
    double class_accuracy(size_t c) const {
        size_t row = 0, col = 0;
        for (size_t j = 0; j < classes.size(); ++j) {
            row += counts[c][j];
            col += counts[j][c];
        }
        const size_t tp = counts[c][c];
        const size_t fn = row - tp;
        const size_t fp = col - tp;
        const size_t tn = total() - tp - fn - fp;
        return static_cast<double>(tp + tn) / static_cast<double>(total());
    }
};

void print_confusion(const Confusion& cm) {
    std::printf("%6s", "");
    for (const auto& c : cm.classes) std::printf("%6s", c.c_str());
    std::printf("\n");
    for (size_t i = 0; i < cm.classes.size(); ++i) {
        std::printf("%6s", cm.classes[i].c_str());
        size_t row = 0;
        for (size_t v : cm.counts[i]) row += v;
        for (size_t j = 0; j < cm.classes.size(); ++j) {
            const double frac =
                row ? static_cast<double>(cm.counts[i][j]) / row : 0.0;
            std::printf("%6.2f", frac);
        }
        std::printf("\n");
    }
}

void save_confusion_csv(const Confusion& cm, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw ApiError{AMC_ERR_IO, "cannot write " + path};
    f << "true\\predicted";
    for (const auto& c : cm.classes) f << "," << c;
    f << "\n";
    for (size_t i = 0; i < cm.classes.size(); ++i) {
        f << cm.classes[i];
        for (size_t j = 0; j < cm.classes.size(); ++j) f << "," << cm.counts[i][j];
        f << "\n";
    }
}

int run_bench_accuracy(const BenchAccCmd& o) {
    const auto snrs = parse_num_list(o.snrs, "snr");
    if (o.train_count == 0 || o.test_count == 0) {
        throw UsageError{"train/test counts must be >= 1"};
    }
    if (o.train_count > 1000 || o.test_count > 1000) {
        throw UsageError{"per-class counts above 1000 would reuse seeds"};
    }
    fs::create_directories(o.out_dir);

    std::ofstream acc(fs::path(o.out_dir) / "accuracy.csv");
    if (!acc) throw ApiError{AMC_ERR_IO, "cannot write accuracy.csv"};
    acc << "snr_db,class,accuracy\n";

    json outputs = json::array();
    outputs.push_back((fs::path(o.out_dir) / "accuracy.csv").string());
    json results = json::array();

    for (double snr : snrs) {
        std::printf("== SNR %s dB ==\n", gshort(snr).c_str());
        DatasetPtr train_ds =
            make_labeled_set(o.synth.p, o.feat.c, snr, o.train_count,
                             o.train_seed, o.train_noise_seed);
        amc_model* mr = nullptr;
        check(amc_train(train_ds.get(), &o.train.p, &mr));
        ModelPtr m = wrap(mr);
        DatasetPtr test_ds =
            make_labeled_set(o.synth.p, o.feat.c, snr, o.test_count, o.test_seed,
                             o.test_noise_seed);

        std::vector<std::string> classes;
        for (size_t i = 0; i < amc_model_class_count(m.get()); ++i) {
            classes.push_back(amc_model_class_name(m.get(), i));
        }
        Confusion cm(classes);
        for (size_t i = 0; i < amc_dataset_size(test_ds.get()); ++i) {
            double f[AMC_FEATURE_COUNT];
            const char* truth = nullptr;
            check(amc_dataset_row(test_ds.get(), i, f, &truth, nullptr, nullptr));
            const char* predicted = nullptr;
            check(amc_predict(m.get(), f, &predicted));
            cm.counts[cm.index(truth)][cm.index(predicted)]++;
        }

        std::printf("confusion matrix (rows true, cols predicted, row-normalized):\n");
        print_confusion(cm);
        std::printf("per-class accuracy:\n");
        for (size_t c = 0; c < classes.size(); ++c) {
            const double a = cm.class_accuracy(c);
            std::printf("  %-4s %.4f\n", classes[c].c_str(), a);
            acc << gshort(snr) << "," << classes[c] << "," << g17(a) << "\n";
        }
        const double overall =
            static_cast<double>(cm.trace()) / static_cast<double>(cm.total());
        std::printf("overall accuracy: %.4f\n\n", overall);
        acc << gshort(snr) << ",OVERALL," << g17(overall) << "\n";

        const std::string cm_path =
            (fs::path(o.out_dir) / ("confusion_snr" + gshort(snr) + ".csv")).string();
        save_confusion_csv(cm, cm_path);
        outputs.push_back(cm_path);
        results.push_back({{"snr_db", snr}, {"overall_accuracy", overall}});
    }
    acc.close();

    json man = manifest_base("bench-accuracy");
    man["config"] = {{"synth", synth_json(o.synth.p)},
                     {"features", feature_json(o.feat.c)},
                     {"train", train_json(o.train.p)},
                     {"snrs", o.snrs},
                     {"train_count", o.train_count},
                     {"test_count", o.test_count},
                     {"train_seed", o.train_seed},
                     {"train_noise_seed", o.train_noise_seed},
                     {"test_seed", o.test_seed},
                     {"test_noise_seed", o.test_noise_seed}};
    man["outputs"] = outputs;
    man["results"] = results;
    const std::string man_path =
        o.manifest.empty() ? (fs::path(o.out_dir) / "manifest.json").string()
                           : o.manifest;
    write_json(man_path, man);
    return 0;
}

// ---- bench-timing ------------------------------------------------------

struct BenchTimingCmd {
    std::string counts = "100,1000,10000,100000";
    size_t queries = 1000;
    double epsilon = 0.01;
    uint64_t seed = 1;
    std::string out = "timing.csv";
    std::string manifest;
};

int run_bench_timing(const BenchTimingCmd& o) {
    auto counts_d = parse_num_list(o.counts, "count");
    std::vector<size_t> counts;
    for (double c : counts_d) {
        if (!(c >= 1.0)) throw UsageError{"counts must be >= 1"};
        counts.push_back(static_cast<size_t>(c));
    }
    std::sort(counts.begin(), counts.end());
    if (o.queries == 0) throw UsageError{"--queries must be >= 1"};
    if (!(o.epsilon > 0.0)) throw UsageError{"--epsilon must be > 0"};

    std::array<double, AMC_FEATURE_COUNT> eps{};
    eps.fill(o.epsilon);
    amc_store* sr = nullptr;
    check(amc_store_create(eps.data(), &sr));
    StorePtr store = wrap(sr);

    std::mt19937_64 rng(o.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> jitter(-0.9, 0.9);
    std::vector<std::array<double, AMC_FEATURE_COUNT>> inserted;
    inserted.reserve(counts.back());

    amc_match_policy policy{};
    std::copy(eps.begin(), eps.end(), policy.tolerance);
    policy.miss_action = AMC_MISS_STRICT_MALICIOUS;

    std::ofstream csv(o.out);
    if (!csv) throw ApiError{AMC_ERR_IO, "cannot write " + o.out};
    csv << "records,match_mean_ns,match_median_ns,scan_mean_ns,scan_median_ns\n";
    std::printf("%10s %16s %16s %16s %16s\n", "records", "match_mean_ns",
                "match_median_ns", "scan_mean_ns", "scan_median_ns");

    auto stats = [](std::vector<int64_t>& ns) {
        double mean = 0.0;
        for (int64_t v : ns) mean += static_cast<double>(v);
        mean /= static_cast<double>(ns.size());
        std::sort(ns.begin(), ns.end());
        const size_t n = ns.size();
        const double median =
            n % 2 ? static_cast<double>(ns[n / 2])
                  : 0.5 * static_cast<double>(ns[n / 2 - 1] + ns[n / 2]);
        return std::pair<double, double>{mean, median};
    };

    json rows = json::array();
    for (size_t target : counts) {
        while (inserted.size() < target) {
            std::array<double, AMC_FEATURE_COUNT> v{};
            for (double& x : v) x = unit(rng);
            const char* label = amc_scheme_name(inserted.size() % amc_scheme_count());
            check(amc_store_insert(store.get(), label, v.data(), 15.0, 1,
                                   inserted.size(), nullptr));
            inserted.push_back(v);
        }

        // half the queries sit inside a stored record's box, half are
        // uniform random (near-certain misses)
        std::vector<std::array<double, AMC_FEATURE_COUNT>> qs(o.queries);
        std::uniform_int_distribution<size_t> pick(0, inserted.size() - 1);
        for (size_t q = 0; q < o.queries; ++q) {
            if (q % 2 == 0) {
                qs[q] = inserted[pick(rng)];
                for (double& x : qs[q]) x += jitter(rng) * o.epsilon;
            } else {
                for (double& x : qs[q]) x = unit(rng);
            }
        }

        const size_t warm = std::min<size_t>(100, o.queries);
        for (size_t q = 0; q < warm; ++q) {
            int fa = 0, fb = 0;
            uint64_t ia = 0, ib = 0;
            check(amc_store_match(store.get(), qs[q].data(), &policy, &fa, &ia,
                                  nullptr, nullptr));
            check(amc_store_scan_match(store.get(), qs[q].data(), &policy, &fb,
                                       &ib, nullptr, nullptr));
            if (fa != fb || ia != ib) {
                std::fprintf(stderr, "warning: match/scan disagree on query %zu\n", q);
            }
        }

        std::vector<int64_t> match_ns(o.queries), scan_ns(o.queries);
        for (size_t q = 0; q < o.queries; ++q) {
            const auto t0 = std::chrono::steady_clock::now();
            check(amc_store_match(store.get(), qs[q].data(), &policy, nullptr,
                                  nullptr, nullptr, nullptr));
            const auto t1 = std::chrono::steady_clock::now();
            match_ns[q] =
                std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count();
        }
        for (size_t q = 0; q < o.queries; ++q) {
            const auto t0 = std::chrono::steady_clock::now();
            check(amc_store_scan_match(store.get(), qs[q].data(), &policy, nullptr,
                                       nullptr, nullptr, nullptr));
            const auto t1 = std::chrono::steady_clock::now();
            scan_ns[q] =
                std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count();
        }
        const auto [m_mean, m_med] = stats(match_ns);
        const auto [s_mean, s_med] = stats(scan_ns);
        std::printf("%10zu %16.0f %16.0f %16.0f %16.0f\n", target, m_mean, m_med,
                    s_mean, s_med);
        csv << target << "," << g17(m_mean) << "," << g17(m_med) << ","
            << g17(s_mean) << "," << g17(s_med) << "\n";
        rows.push_back({{"records", target},
                        {"match_mean_ns", m_mean},
                        {"match_median_ns", m_med},
                        {"scan_mean_ns", s_mean},
                        {"scan_median_ns", s_med}});
    }
    csv.close();

    json man = manifest_base("bench-timing");
    man["config"] = {{"counts", o.counts},
                     {"queries", o.queries},
                     {"epsilon", o.epsilon},
                     {"seed", o.seed}};
    man["outputs"] = {o.out};
    man["results"] = rows;
    const std::string man_path =
        o.manifest.empty() ? o.out + ".manifest.json" : o.manifest;
    write_json(man_path, man);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"amc: modulation classification toolkit"};
    app.set_version_flag("--version", amc_version());
    app.require_subcommand(1);
    // one config option on the root; subcommand keys live in [section]s.
    // fallthrough lets "--config" trail the subcommand name.
    app.set_config("--config", "", "key=value config file ([synth], [train], ...)");
    app.allow_config_extras(true);
    app.fallthrough();

    SynthCmd synth_cmd;
    auto* synth = app.add_subcommand("synth", "synthesize modulated waveforms");
    synth_cmd.synth.attach(synth);
    synth->add_option("--schemes", synth_cmd.schemes,
                      "comma list of schemes, or 'all'");
    synth->add_option("--snrs", synth_cmd.snrs, "comma list of SNRs in dB (inf ok)");
    synth->add_option("--count", synth_cmd.count, "realizations per (scheme, snr)");
    synth->add_option("--seed", synth_cmd.seed, "base seed; item k uses seed+k");
    synth->add_option("--noise-offset", synth_cmd.noise_offset,
                      "noise seed = symbol seed + offset");
    synth->add_option("--out", synth_cmd.out_dir, "output directory");
    synth->add_option("--manifest", synth_cmd.manifest, "manifest path override");

    ExtractCmd extract_cmd;
    auto* extract =
        app.add_subcommand("extract", "extract feature rows from waveforms");
    extract_cmd.feat.attach(extract);
    extract->add_option("--in", extract_cmd.inputs,
                        "waveform files and/or synth manifest JSONs");
    extract->add_option("--csv", extract_cmd.csv_out, "CSV output path");
    extract->add_option("--arff", extract_cmd.arff_out, "ARFF output path");
    extract->add_option("--relation", extract_cmd.relation, "ARFF relation name");
    extract->add_option("--manifest", extract_cmd.manifest, "manifest path override");

    TrainCmd train_cmd;
    auto* train = app.add_subcommand("train", "train the pairwise SVM model");
    train_cmd.train.attach(train);
    train->add_option("--in", train_cmd.in, "features file (.csv or .arff)");
    train->add_option("--model-out", train_cmd.model_out, "model output path");
    train->add_option("--manifest", train_cmd.manifest, "manifest path override");

    ClassifyCmd classify_cmd;
    auto* classify =
        app.add_subcommand("classify", "match against the store, else classify");
    classify_cmd.feat.attach(classify);
    classify->add_option("--model", classify_cmd.model, "trained model path");
    classify->add_option("--store", classify_cmd.store, "feature store path");
    classify->add_option("--store-out", classify_cmd.store_out,
                         "where to write the updated store (default --store)");
    classify->add_option("--in", classify_cmd.inputs,
                         "waveform files and/or manifest JSONs");
    classify->add_option("--tolerance", classify_cmd.tolerance,
                         "match tolerance: 1 or 9 comma values (default: store epsilon)");
    classify->add_option("--miss-action", classify_cmd.miss_action,
                         "strict | fallback");
    classify->add_flag("--insert-on-classify", classify_cmd.insert_on_classify,
                       "insert classifier results into the store");
    classify->add_flag("--create-store", classify_cmd.create_store,
                       "create the store file if missing (needs --tolerance)");
    classify->add_option("--manifest", classify_cmd.manifest, "manifest path override");

    BenchAccCmd bench_acc_cmd;
    auto* bench_acc = app.add_subcommand(
        "bench-accuracy", "train/test accuracy and confusion matrices per SNR");
    bench_acc_cmd.synth.attach(bench_acc);
    bench_acc_cmd.feat.attach(bench_acc);
    bench_acc_cmd.train.attach(bench_acc);
    bench_acc->add_option("--snrs", bench_acc_cmd.snrs, "comma list of SNRs in dB");
    bench_acc->add_option("--train-count", bench_acc_cmd.train_count,
                          "train realizations per class");
    bench_acc->add_option("--test-count", bench_acc_cmd.test_count,
                          "test realizations per class");
    bench_acc->add_option("--train-seed", bench_acc_cmd.train_seed,
                          "train symbol seed base");
    bench_acc->add_option("--train-noise-seed", bench_acc_cmd.train_noise_seed,
                          "train noise seed base");
    bench_acc->add_option("--test-seed", bench_acc_cmd.test_seed,
                          "test symbol seed base");
    bench_acc->add_option("--test-noise-seed", bench_acc_cmd.test_noise_seed,
                          "test noise seed base");
    bench_acc->add_option("--out-dir", bench_acc_cmd.out_dir, "artifact directory");
    bench_acc->add_option("--manifest", bench_acc_cmd.manifest,
                          "manifest path override");

    BenchTimingCmd bench_timing_cmd;
    auto* bench_timing = app.add_subcommand(
        "bench-timing", "store match vs linear scan latency by record count");
    bench_timing->add_option("--counts", bench_timing_cmd.counts,
                             "comma list of store sizes");
    bench_timing->add_option("--queries", bench_timing_cmd.queries,
                             "queries per store size");
    bench_timing->add_option("--epsilon", bench_timing_cmd.epsilon,
                             "store epsilon per feature");
    bench_timing->add_option("--seed", bench_timing_cmd.seed, "RNG seed");
    bench_timing->add_option("--out", bench_timing_cmd.out, "CSV output path");
    bench_timing->add_option("--manifest", bench_timing_cmd.manifest,
                             "manifest path override");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int r = app.exit(e);
        return r == 0 ? 0 : 1;
    }

    try {
        if (synth->parsed()) return run_synth(synth_cmd);
        if (extract->parsed()) return run_extract(extract_cmd);
        if (train->parsed()) return run_train(train_cmd);
        if (classify->parsed()) return run_classify(classify_cmd);
        if (bench_acc->parsed()) return run_bench_accuracy(bench_acc_cmd);
        if (bench_timing->parsed()) return run_bench_timing(bench_timing_cmd);
    } catch (const UsageError& e) {
        std::fprintf(stderr, "error: %s\n", e.message.c_str());
        return 1;
    } catch (const ApiError& e) {
        std::fprintf(stderr, "error: %s\n", e.message.c_str());
        return exit_for_api(e.code);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
