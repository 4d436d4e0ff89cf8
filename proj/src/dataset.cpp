#include "dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "error.hpp"

namespace amc {

namespace {

const char* kCsvHeader =
    "gamma_max,sigma_dp,sigma_ap,p,sigma_aa,sigma_af,sigma_a,mu42a,mu42f,"
    "label,snr_db,seed";

[[noreturn]] void format_fail(const std::string& path, size_t line,
                              const std::string& what) {
    std::ostringstream os;
    os << path << ": line " << line << ": " << what;
    throw Error(ErrorCode::Format, os.str());
}

double parse_double(const std::string& tok, const std::string& path,
                    size_t line) {
    try {
        size_t used = 0;
        double v = std::stod(tok, &used);
        if (used != tok.size()) format_fail(path, line, "bad number '" + tok + "'");
        return v;
    } catch (const std::exception&) {
        format_fail(path, line, "bad number '" + tok + "'");
    }
}

uint64_t parse_u64(const std::string& tok, const std::string& path,
                   size_t line) {
    // stoull would wrap a leading minus instead of failing
    if (tok.empty() || tok[0] == '-') {
        format_fail(path, line, "bad integer '" + tok + "'");
    }
    try {
        size_t used = 0;
        uint64_t v = std::stoull(tok, &used);
        if (used != tok.size()) format_fail(path, line, "bad integer '" + tok + "'");
        return v;
    } catch (const std::exception&) {
        format_fail(path, line, "bad integer '" + tok + "'");
    }
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

std::string trim(const std::string& s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

void print_g17(std::ostream& os, double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    os << buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path);
    if (!f) throw Error(ErrorCode::Io, "cannot open for writing: " + path);
    return f;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error(ErrorCode::Io, "cannot open for reading: " + path);
    return f;
}

}  // namespace

void LabeledDataset::add(const DatasetRow& r) {
    if (!r.features.all_finite()) {
        throw Error(ErrorCode::Argument, "dataset row has non-finite features");
    }
    if (r.label == Scheme::Unknown) {
        throw Error(ErrorCode::Argument, "dataset row has no label");
    }
    rows.push_back(r);
}

std::vector<Scheme> LabeledDataset::class_list() const {
    std::vector<Scheme> out;
    for (Scheme s : all_schemes()) {
        if (class_count(s) > 0) out.push_back(s);
    }
    return out;
}

size_t LabeledDataset::class_count(Scheme s) const {
    size_t n = 0;
    for (const auto& r : rows) {
        if (r.label == s) ++n;
    }
    return n;
}

void save_csv(const LabeledDataset& ds, const std::string& path) {
    std::ofstream f = open_out(path);
    f << kCsvHeader << "\n";
    for (const auto& r : ds.rows) {
        for (double v : r.features.values()) {
            print_g17(f, v);
            f << ',';
        }
        f << scheme_name(r.label) << ',';
        print_g17(f, r.snr_db);
        f << ',' << r.seed << "\n";
    }
    if (!f) throw Error(ErrorCode::Io, "write failed: " + path);
}

LabeledDataset load_csv(const std::string& path) {
    std::ifstream f = open_in(path);
    std::string line;
    size_t lineno = 0;
    if (!std::getline(f, line)) format_fail(path, 1, "empty file");
    ++lineno;
    if (trim(line) != kCsvHeader) {
        format_fail(path, 1, "unexpected header (want '" + std::string(kCsvHeader) + "')");
    }
    LabeledDataset ds;
    while (std::getline(f, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        auto toks = split(trim(line), ',');
        if (toks.size() != kFeatureCount + 3) {
            format_fail(path, lineno, "expected 12 fields, got " +
                                          std::to_string(toks.size()));
        }
        DatasetRow r;
        std::array<double, kFeatureCount> vals{};
        for (size_t i = 0; i < kFeatureCount; ++i) {
            vals[i] = parse_double(toks[i], path, lineno);
        }
        r.features = FeatureVector::from_values(vals);
        auto s = scheme_from_name(toks[kFeatureCount]);
        if (!s) {
            format_fail(path, lineno, "unknown label '" + toks[kFeatureCount] + "'");
        }
        r.label = *s;
        r.snr_db = parse_double(toks[kFeatureCount + 1], path, lineno);
        r.seed = parse_u64(toks[kFeatureCount + 2], path, lineno);
        if (!r.features.all_finite()) {
            format_fail(path, lineno, "non-finite feature value");
        }
        ds.rows.push_back(r);
    }
    return ds;
}

void save_arff(const LabeledDataset& ds, const std::string& path,
               const std::string& relation) {
    std::ofstream f = open_out(path);
    f << "@relation " << relation << "\n\n";
    for (const char* name : feature_names()) {
        f << "@attribute " << name << " numeric\n";
    }
    f << "@attribute class {" << scheme_name_list() << "}\n\n@data\n";
    for (const auto& r : ds.rows) {
        for (double v : r.features.values()) {
            print_g17(f, v);
            f << ',';
        }
        f << scheme_name(r.label) << "\n";
    }
    if (!f) throw Error(ErrorCode::Io, "write failed: " + path);
}

LabeledDataset load_arff(const std::string& path) {
    std::ifstream f = open_in(path);
    std::string line;
    size_t lineno = 0;
    size_t num_attrs = 0;
    bool class_attr_seen = false;
    bool in_data = false;
    LabeledDataset ds;
    while (std::getline(f, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '%') continue;
        if (!in_data) {
            std::string lt = lower(t);
            if (lt.rfind("@relation", 0) == 0) continue;
            if (lt.rfind("@attribute", 0) == 0) {
                if (lt.find('{') != std::string::npos) {
                    class_attr_seen = true;
                } else {
                    if (class_attr_seen) {
                        format_fail(path, lineno,
                                    "numeric attribute after class attribute");
                    }
                    ++num_attrs;
                }
                continue;
            }
            if (lt.rfind("@data", 0) == 0) {
                if (num_attrs != kFeatureCount || !class_attr_seen) {
                    format_fail(path, lineno,
                                "expected 9 numeric attributes and a class attribute");
                }
                in_data = true;
                continue;
            }
            format_fail(path, lineno, "unexpected header line '" + t + "'");
        }
        auto toks = split(t, ',');
        if (toks.size() != kFeatureCount + 1) {
            format_fail(path, lineno, "expected 10 fields, got " +
                                          std::to_string(toks.size()));
        }
        DatasetRow r;
        std::array<double, kFeatureCount> vals{};
        for (size_t i = 0; i < kFeatureCount; ++i) {
            vals[i] = parse_double(trim(toks[i]), path, lineno);
        }
        r.features = FeatureVector::from_values(vals);
        auto s = scheme_from_name(trim(toks[kFeatureCount]));
        if (!s) {
            format_fail(path, lineno, "unknown label '" + toks[kFeatureCount] + "'");
        }
        r.label = *s;
        if (!r.features.all_finite()) {
            format_fail(path, lineno, "non-finite feature value");
        }
        ds.rows.push_back(r);
    }
    if (!in_data) format_fail(path, lineno ? lineno : 1, "missing @data section");
    return ds;
}

}  // namespace amc
