#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "features.hpp"
#include "scheme.hpp"

namespace amc {

// One labeled feature row plus the provenance fields carried by the
// CSV format (snr_db, seed). ARFF carries only features + label.
struct DatasetRow {
    FeatureVector features;
    Scheme label = Scheme::Unknown;
    double snr_db = 0.0;
    uint64_t seed = 0;
};

struct LabeledDataset {
    std::vector<DatasetRow> rows;

    size_t size() const { return rows.size(); }
    bool empty() const { return rows.empty(); }
    void add(const DatasetRow& r);                 // validates finiteness
    std::vector<Scheme> class_list() const;        // canonical order
    size_t class_count(Scheme s) const;
};

// CSV: fixed header
// gamma_max,sigma_dp,sigma_ap,p,sigma_aa,sigma_af,sigma_a,mu42a,mu42f,label,snr_db,seed
// one row per realization, %.17g precision so values round-trip exactly.
void save_csv(const LabeledDataset& ds, const std::string& path);
LabeledDataset load_csv(const std::string& path);

// ARFF: 9 numeric attributes + one nominal class attribute listing the
// 11 scheme labels. Reader accepts our own writer's output plus
// comments and blank lines.
void save_arff(const LabeledDataset& ds, const std::string& path,
               const std::string& relation = "amc_features");
LabeledDataset load_arff(const std::string& path);

}  // namespace amc
