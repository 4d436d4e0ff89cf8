#include "svm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "error.hpp"

namespace amc {

void KernelSpec::validate() const {
    if (exponent < 1) {
        throw Error(ErrorCode::Config, "kernel exponent must be >= 1");
    }
    if (!(offset >= 0.0)) {
        throw Error(ErrorCode::Config, "kernel offset must be >= 0");
    }
}

double kernel_eval(const KernelSpec& k, const std::vector<double>& x,
                   const std::vector<double>& y) {
    if (x.size() != y.size()) {
        throw Error(ErrorCode::Shape, "kernel operands have different dimensions");
    }
    double dot = 0.0;
    for (size_t i = 0; i < x.size(); ++i) dot += x[i] * y[i];
    const double base = dot + k.offset;
    if (k.exponent == 1) return base;
    double out = 1.0;
    for (int i = 0; i < k.exponent; ++i) out *= base;
    return out;
}

double predict_binary(const BinarySvmModel& m, const std::vector<double>& x) {
    double f = m.bias;
    for (size_t k = 0; k < m.support_vectors.size(); ++k) {
        f += m.signed_weights[k] * kernel_eval(m.kernel, x, m.support_vectors[k]);
    }
    return f;
}

Scheme binary_decision(const BinarySvmModel& m, double f) {
    if (f > 0.0) return m.positive_class;
    if (f < 0.0) return m.negative_class;
    return std::strcmp(scheme_name(m.positive_class),
                       scheme_name(m.negative_class)) <= 0
               ? m.positive_class
               : m.negative_class;
}

void SmoConfig::validate() const {
    if (!(box_c > 0.0)) throw Error(ErrorCode::Config, "C must be > 0");
    if (!(tol > 0.0)) throw Error(ErrorCode::Config, "tol must be > 0");
    if (max_passes == 0) {
        throw Error(ErrorCode::Config, "max passes must be >= 1");
    }
    kernel.validate();
}

namespace {

// Working state of one SMO run. Keeps O(n) storage: multipliers,
// labels and the error cache -- kernel values are recomputed on demand.
class SmoSolver {
  public:
    SmoSolver(const std::vector<std::vector<double>>& rows,
              const std::vector<int>& labels, const SmoConfig& cfg)
        : rows_(rows), y_(labels), cfg_(cfg), n_(rows.size()),
          alpha_(rows.size(), 0.0), error_(rows.size(), 0.0),
          rng_(cfg.heuristic_seed) {
        for (size_t i = 0; i < n_; ++i) error_[i] = -y_[i];  // f == 0 initially
    }

    void solve(SmoDiagnostics* diag) {
        size_t num_changed = 0;
        bool examine_all = true;
        size_t outer = 0;
        while (num_changed > 0 || examine_all) {
            if (++outer > cfg_.max_passes) {
                double worst = worst_violation();
                char buf[128];
                std::snprintf(buf, sizeof(buf),
                              "SMO did not converge in %zu passes; worst KKT "
                              "violation %.3e (tol %.3e)",
                              cfg_.max_passes, worst, cfg_.tol);
                throw Error(ErrorCode::Convergence, buf);
            }
            num_changed = 0;
            if (examine_all) {
                for (size_t i = 0; i < n_; ++i) num_changed += examine(i);
            } else {
                for (size_t i = 0; i < n_; ++i) {
                    if (!at_bound(alpha_[i])) num_changed += examine(i);
                }
            }
            if (examine_all) {
                examine_all = false;
            } else if (num_changed == 0) {
                examine_all = true;
            }
        }
        finalize();
        if (diag) {
            diag->outer_iterations = outer;
            diag->accepted_steps = accepted_;
            diag->final_objective = objective();
            diag->max_kkt_residual = worst_violation();
            diag->alphas = alpha_;
            diag->objective_trace = trace_;
        }
    }

    BinarySvmModel extract_model() const {
        BinarySvmModel m;
        m.kernel = cfg_.kernel;
        m.box_c = cfg_.box_c;
        m.bias = b_;
        for (size_t i = 0; i < n_; ++i) {
            if (alpha_[i] > 0.0) {
                m.support_vectors.push_back(rows_[i]);
                m.signed_weights.push_back(y_[i] * alpha_[i]);
            }
        }
        return m;
    }

    double objective() const {
        // Dual: sum alpha_i - 1/2 sum_ij y_i y_j alpha_i alpha_j K_ij.
        double lin = 0.0, quad = 0.0;
        for (size_t i = 0; i < n_; ++i) {
            if (alpha_[i] == 0.0) continue;
            lin += alpha_[i];
            for (size_t j = 0; j < n_; ++j) {
                if (alpha_[j] == 0.0) continue;
                quad += y_[i] * y_[j] * alpha_[i] * alpha_[j] *
                        kernel_eval(cfg_.kernel, rows_[i], rows_[j]);
            }
        }
        return lin - 0.5 * quad;
    }

  private:
    static constexpr double kEps = 1e-12;

    // Platt's running threshold can drift from the value that actually
    // satisfies the KKT inequalities, most visibly when every multiplier
    // ends at a bound (the threshold is then only interval-constrained).
    // Snap near-bound multipliers and recenter b on the feasible set.
    void finalize() {
        const double c = cfg_.box_c;
        const double snap = 1e-10 * c;
        for (double& a : alpha_) {
            if (a < snap) a = 0.0;
            else if (a > c - snap) a = c;
        }
        double nb_sum = 0.0;
        size_t nb_count = 0;
        double lo = -std::numeric_limits<double>::infinity();
        double hi = std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < n_; ++i) {
            const double w = decision(i) - b_;  // kernel expansion only
            if (!at_bound(alpha_[i])) {
                nb_sum += y_[i] - w;
                ++nb_count;
                continue;
            }
            const bool zero = alpha_[i] <= 0.0;
            if (y_[i] > 0) {
                // margin w + b: >= 1 at alpha=0, <= 1 at alpha=C
                if (zero) lo = std::max(lo, 1.0 - w);
                else hi = std::min(hi, 1.0 - w);
            } else {
                // margin -(w + b)
                if (zero) hi = std::min(hi, -1.0 - w);
                else lo = std::max(lo, -1.0 - w);
            }
        }
        if (nb_count > 0) {
            b_ = nb_sum / static_cast<double>(nb_count);
        } else if (std::isinf(lo) && std::isinf(hi)) {
            // no constraints at all (empty problem); keep running value
        } else if (std::isinf(lo)) {
            b_ = hi;
        } else if (std::isinf(hi)) {
            b_ = lo;
        } else {
            // midpoint is the minimax choice even if rounding made the
            // interval degenerate
            b_ = 0.5 * (lo + hi);
        }
    }

    bool at_bound(double a) const { return a <= 0.0 || a >= cfg_.box_c; }

    double decision(size_t i) const {
        double f = b_;
        for (size_t k = 0; k < n_; ++k) {
            if (alpha_[k] == 0.0) continue;
            f += y_[k] * alpha_[k] * kernel_eval(cfg_.kernel, rows_[k], rows_[i]);
        }
        return f;
    }

    double error_of(size_t i) const {
        if (!at_bound(alpha_[i])) return error_[i];
        return decision(i) - y_[i];
    }

    double worst_violation() const {
        double worst = 0.0;
        for (size_t i = 0; i < n_; ++i) {
            const double m = y_[i] * decision(i);  // margin
            double r = 0.0;
            if (alpha_[i] <= 0.0) {
                r = std::max(0.0, 1.0 - m);
            } else if (alpha_[i] >= cfg_.box_c) {
                r = std::max(0.0, m - 1.0);
            } else {
                r = std::fabs(m - 1.0);
            }
            worst = std::max(worst, r);
        }
        return worst;
    }

    size_t examine(size_t i2) {
        const double y2 = y_[i2];
        const double a2 = alpha_[i2];
        const double e2 = error_of(i2);
        const double r2 = e2 * y2;
        const bool violated = (r2 < -cfg_.tol && a2 < cfg_.box_c) ||
                              (r2 > cfg_.tol && a2 > 0.0);
        if (!violated) return 0;

        // Second choice 1: largest |E1 - E2| among non-bound points.
        size_t best = n_;
        double best_gap = -1.0;
        for (size_t i = 0; i < n_; ++i) {
            if (i == i2 || at_bound(alpha_[i])) continue;
            const double gap = std::fabs(error_[i] - e2);
            if (gap > best_gap) {
                best_gap = gap;
                best = i;
            }
        }
        if (best < n_ && take_step(best, i2)) return 1;

        // Second choice 2: all non-bound points from a random offset.
        const size_t start = rng_() % std::max<size_t>(n_, 1);
        for (size_t k = 0; k < n_; ++k) {
            const size_t i1 = (start + k) % n_;
            if (i1 == i2 || at_bound(alpha_[i1])) continue;
            if (take_step(i1, i2)) return 1;
        }
        // Second choice 3: everything, fresh offset.
        const size_t start2 = rng_() % std::max<size_t>(n_, 1);
        for (size_t k = 0; k < n_; ++k) {
            const size_t i1 = (start2 + k) % n_;
            if (i1 == i2) continue;
            if (take_step(i1, i2)) return 1;
        }
        return 0;
    }

    bool take_step(size_t i1, size_t i2) {
        if (i1 == i2) return false;
        const double a1 = alpha_[i1], a2 = alpha_[i2];
        const double y1 = y_[i1], y2 = y_[i2];
        const double e1 = error_of(i1), e2 = error_of(i2);
        const double s = y1 * y2;
        const double c = cfg_.box_c;

        double lo, hi;
        if (s < 0.0) {
            lo = std::max(0.0, a2 - a1);
            hi = std::min(c, c + a2 - a1);
        } else {
            lo = std::max(0.0, a1 + a2 - c);
            hi = std::min(c, a1 + a2);
        }
        if (lo >= hi) return false;

        const double k11 = kernel_eval(cfg_.kernel, rows_[i1], rows_[i1]);
        const double k12 = kernel_eval(cfg_.kernel, rows_[i1], rows_[i2]);
        const double k22 = kernel_eval(cfg_.kernel, rows_[i2], rows_[i2]);
        const double eta = k11 + k22 - 2.0 * k12;

        double a2_new;
        if (eta > 0.0) {
            a2_new = a2 + y2 * (e1 - e2) / eta;
            a2_new = std::clamp(a2_new, lo, hi);
        } else {
            // Flat or concave direction: evaluate the objective at both
            // clip ends and move to the strictly better one. w1/w2 are
            // the kernel expansions without the threshold term.
            const double w1 = e1 + y1 - b_;
            const double w2 = e2 + y2 - b_;
            const double f1 = y1 * w1 - a1 * k11 - s * a2 * k12;
            const double f2 = y2 * w2 - s * a1 * k12 - a2 * k22;
            const double l1 = a1 + s * (a2 - lo);
            const double h1 = a1 + s * (a2 - hi);
            const double obj_lo = l1 * f1 + lo * f2 + 0.5 * l1 * l1 * k11 +
                                  0.5 * lo * lo * k22 + s * lo * l1 * k12;
            const double obj_hi = h1 * f1 + hi * f2 + 0.5 * h1 * h1 * k11 +
                                  0.5 * hi * hi * k22 + s * hi * h1 * k12;
            if (obj_lo < obj_hi - kEps) {
                a2_new = lo;
            } else if (obj_lo > obj_hi + kEps) {
                a2_new = hi;
            } else {
                return false;
            }
        }
        if (std::fabs(a2_new - a2) < kEps * (a2_new + a2 + kEps)) return false;

        const double a1_new = a1 + s * (a2 - a2_new);
        const double d1 = y1 * (a1_new - a1);
        const double d2 = y2 * (a2_new - a2);

        const double b1 = b_ - e1 - d1 * k11 - d2 * k12;
        const double b2 = b_ - e2 - d1 * k12 - d2 * k22;
        const double b_old = b_;
        if (a1_new > 0.0 && a1_new < c) {
            b_ = b1;
        } else if (a2_new > 0.0 && a2_new < c) {
            b_ = b2;
        } else {
            b_ = 0.5 * (b1 + b2);
        }

        alpha_[i1] = a1_new;
        alpha_[i2] = a2_new;

        for (size_t k = 0; k < n_; ++k) {
            if (at_bound(alpha_[k])) continue;
            error_[k] += d1 * kernel_eval(cfg_.kernel, rows_[i1], rows_[k]) +
                         d2 * kernel_eval(cfg_.kernel, rows_[i2], rows_[k]) +
                         (b_ - b_old);
        }
        error_[i1] = at_bound(a1_new) ? 0.0 : decision(i1) - y1;
        error_[i2] = at_bound(a2_new) ? 0.0 : decision(i2) - y2;

        ++accepted_;
        if (cfg_.track_objective) trace_.push_back(objective());
        return true;
    }

    const std::vector<std::vector<double>>& rows_;
    const std::vector<int>& y_;
    const SmoConfig& cfg_;
    size_t n_;
    std::vector<double> alpha_;
    std::vector<double> error_;
    double b_ = 0.0;
    size_t accepted_ = 0;
    std::vector<double> trace_;
    std::mt19937_64 rng_;
};

}  // namespace

BinarySvmModel train_binary(const std::vector<std::vector<double>>& rows,
                            const std::vector<int>& labels,
                            const SmoConfig& cfg, SmoDiagnostics* diag) {
    cfg.validate();
    if (rows.size() != labels.size()) {
        throw Error(ErrorCode::Shape, "row/label count mismatch");
    }
    if (rows.empty()) {
        throw Error(ErrorCode::InsufficientData, "no training rows");
    }
    const size_t dim = rows[0].size();
    bool has_pos = false, has_neg = false;
    for (size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != dim) {
            throw Error(ErrorCode::Shape, "training rows have mixed dimensions");
        }
        if (labels[i] == 1) {
            has_pos = true;
        } else if (labels[i] == -1) {
            has_neg = true;
        } else {
            throw Error(ErrorCode::Argument, "labels must be +1 or -1");
        }
    }
    if (!has_pos || !has_neg) {
        throw Error(ErrorCode::Degenerate,
                    "training set contains a single class");
    }
    SmoSolver solver(rows, labels, cfg);
    solver.solve(diag);
    return solver.extract_model();
}

KktReport kkt_report(const BinarySvmModel& m,
                     const std::vector<std::vector<double>>& rows,
                     const std::vector<int>& labels, double tol) {
    if (rows.size() != labels.size()) {
        throw Error(ErrorCode::Shape, "row/label count mismatch");
    }
    KktReport rep;
    rep.tol = tol;
    double lambda_sum = 0.0;
    for (double w : m.signed_weights) lambda_sum += w;
    rep.equality_gap = std::fabs(lambda_sum);
    rep.residuals.reserve(rows.size());
    for (size_t i = 0; i < rows.size(); ++i) {
        double alpha = 0.0;
        for (size_t k = 0; k < m.support_vectors.size(); ++k) {
            if (m.support_vectors[k] == rows[i]) {
                alpha = std::fabs(m.signed_weights[k]);
                break;
            }
        }
        const double margin = labels[i] * predict_binary(m, rows[i]);
        double r;
        if (alpha <= 0.0) {
            r = std::max(0.0, 1.0 - margin);
        } else if (alpha >= m.box_c) {
            r = std::max(0.0, margin - 1.0);
        } else {
            r = std::fabs(margin - 1.0);
        }
        rep.residuals.push_back(r);
        rep.max_residual = std::max(rep.max_residual, r);
        if (r > tol) ++rep.violations;
    }
    return rep;
}

Normalization normalize_fit(const LabeledDataset& ds) {
    if (ds.empty()) {
        throw Error(ErrorCode::InsufficientData,
                    "cannot fit normalization on an empty dataset");
    }
    Normalization n;
    n.lo.assign(kFeatureCount, std::numeric_limits<double>::infinity());
    n.hi.assign(kFeatureCount, -std::numeric_limits<double>::infinity());
    for (const auto& r : ds.rows) {
        const auto v = r.features.values();
        for (size_t i = 0; i < kFeatureCount; ++i) {
            n.lo[i] = std::min(n.lo[i], v[i]);
            n.hi[i] = std::max(n.hi[i], v[i]);
        }
    }
    return n;
}

std::vector<double> normalize_apply(const Normalization& n,
                                    const std::vector<double>& x) {
    if (x.size() != n.dim()) {
        throw Error(ErrorCode::Shape, "normalization dimension mismatch");
    }
    std::vector<double> out(x.size());
    for (size_t i = 0; i < x.size(); ++i) {
        const double span = n.hi[i] - n.lo[i];
        if (span <= 0.0) {
            out[i] = 0.5;  // constant training column
        } else {
            out[i] = std::clamp((x[i] - n.lo[i]) / span, 0.0, 1.0);
        }
    }
    return out;
}

MulticlassModel train_multiclass(const LabeledDataset& ds, const SmoConfig& cfg) {
    cfg.validate();
    const auto classes = ds.class_list();
    if (classes.size() < 2) {
        throw Error(ErrorCode::InsufficientData,
                    "multiclass training needs at least 2 classes");
    }
    for (Scheme s : classes) {
        if (ds.class_count(s) < 2) {
            throw Error(ErrorCode::InsufficientData,
                        std::string("class ") + scheme_name(s) +
                            " has fewer than 2 rows");
        }
    }

    MulticlassModel m;
    m.norm = normalize_fit(ds);
    m.classes = classes;
    m.box_c = cfg.box_c;
    m.tol = cfg.tol;
    m.kernel = cfg.kernel;

    // Normalize once; per-pair training then just selects row subsets.
    std::vector<std::vector<double>> norm_rows;
    norm_rows.reserve(ds.size());
    for (const auto& r : ds.rows) {
        const auto v = r.features.values();
        norm_rows.push_back(
            normalize_apply(m.norm, std::vector<double>(v.begin(), v.end())));
    }

    for (size_t i = 0; i < classes.size(); ++i) {
        for (size_t j = i + 1; j < classes.size(); ++j) {
            std::vector<std::vector<double>> rows;
            std::vector<int> labels;
            for (size_t r = 0; r < ds.size(); ++r) {
                if (ds.rows[r].label == classes[i]) {
                    rows.push_back(norm_rows[r]);
                    labels.push_back(+1);
                } else if (ds.rows[r].label == classes[j]) {
                    rows.push_back(norm_rows[r]);
                    labels.push_back(-1);
                }
            }
            BinarySvmModel bm = train_binary(rows, labels, cfg);
            bm.positive_class = classes[i];
            bm.negative_class = classes[j];
            m.pair_models.push_back(std::move(bm));
        }
    }
    return m;
}

Scheme predict_multiclass(const MulticlassModel& m, const FeatureVector& x,
                          VoteDetail* detail) {
    if (!x.all_finite()) {
        throw Error(ErrorCode::Argument, "feature vector has non-finite entries");
    }
    const auto raw = x.values();
    const std::vector<double> nx =
        normalize_apply(m.norm, std::vector<double>(raw.begin(), raw.end()));

    std::vector<int> votes(m.classes.size(), 0);
    std::vector<double> margin(m.classes.size(), 0.0);
    auto class_slot = [&](Scheme s) {
        for (size_t i = 0; i < m.classes.size(); ++i) {
            if (m.classes[i] == s) return i;
        }
        throw Error(ErrorCode::Format, "pair model references unknown class");
    };
    for (const auto& bm : m.pair_models) {
        const double f = predict_binary(bm, nx);
        const Scheme winner = binary_decision(bm, f);
        votes[class_slot(winner)] += 1;
        const double a = std::fabs(f);
        margin[class_slot(bm.positive_class)] += a;
        margin[class_slot(bm.negative_class)] += a;
    }

    int best_votes = -1;
    for (int v : votes) best_votes = std::max(best_votes, v);
    size_t winner = m.classes.size();
    double winner_margin = -1.0;
    for (size_t i = 0; i < m.classes.size(); ++i) {
        if (votes[i] != best_votes) continue;
        if (winner == m.classes.size() || margin[i] > winner_margin) {
            winner = i;
            winner_margin = margin[i];
        }
    }

    if (detail) {
        detail->classes = m.classes;
        detail->votes = votes;
        detail->margin_sums = margin;
        detail->label = m.classes[winner];
    }
    return m.classes[winner];
}

namespace {

void print_g17(std::ostream& os, double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    os << buf;
}

[[noreturn]] void model_fail(const std::string& path, size_t line,
                             const std::string& what) {
    std::ostringstream os;
    os << path << ": line " << line << ": " << what;
    throw Error(ErrorCode::Format, os.str());
}

}  // namespace

void save_model(const MulticlassModel& m, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw Error(ErrorCode::Io, "cannot open for writing: " + path);
    f << "AMCSVM1\n";
    f << "kernel poly " << m.kernel.exponent << ' ';
    print_g17(f, m.kernel.offset);
    f << "\nc ";
    print_g17(f, m.box_c);
    f << "\ntol ";
    print_g17(f, m.tol);
    f << "\ndim " << kFeatureCount << "\nnorm_min";
    for (double v : m.norm.lo) {
        f << ' ';
        print_g17(f, v);
    }
    f << "\nnorm_max";
    for (double v : m.norm.hi) {
        f << ' ';
        print_g17(f, v);
    }
    f << "\nclasses " << m.classes.size();
    for (Scheme s : m.classes) f << ' ' << scheme_name(s);
    f << "\npairs " << m.pair_models.size() << "\n";
    for (const auto& bm : m.pair_models) {
        f << "pair " << scheme_name(bm.positive_class) << ' '
          << scheme_name(bm.negative_class) << ' ' << bm.support_count() << ' ';
        print_g17(f, bm.bias);
        f << "\n";
        for (size_t k = 0; k < bm.support_count(); ++k) {
            print_g17(f, bm.signed_weights[k]);
            for (double v : bm.support_vectors[k]) {
                f << ' ';
                print_g17(f, v);
            }
            f << "\n";
        }
    }
    f << "end\n";
    if (!f) throw Error(ErrorCode::Io, "write failed: " + path);
}

MulticlassModel load_model(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error(ErrorCode::Io, "cannot open for reading: " + path);
    std::string line;
    size_t lineno = 0;
    auto next_line = [&]() -> std::string {
        if (!std::getline(f, line)) model_fail(path, lineno + 1, "unexpected end of file");
        ++lineno;
        return line;
    };

    if (next_line() != "AMCSVM1") {
        model_fail(path, lineno, "unknown model version tag '" + line + "'");
    }

    MulticlassModel m;
    {
        std::istringstream is(next_line());
        std::string kw, kind;
        if (!(is >> kw >> kind >> m.kernel.exponent >> m.kernel.offset) ||
            kw != "kernel" || kind != "poly") {
            model_fail(path, lineno, "bad kernel line");
        }
    }
    {
        std::istringstream is(next_line());
        std::string kw;
        if (!(is >> kw >> m.box_c) || kw != "c") model_fail(path, lineno, "bad c line");
    }
    {
        std::istringstream is(next_line());
        std::string kw;
        if (!(is >> kw >> m.tol) || kw != "tol") model_fail(path, lineno, "bad tol line");
    }
    size_t dim = 0;
    {
        std::istringstream is(next_line());
        std::string kw;
        if (!(is >> kw >> dim) || kw != "dim" || dim != kFeatureCount) {
            model_fail(path, lineno, "bad dim line");
        }
    }
    auto read_vec = [&](const char* kw_want, std::vector<double>& out) {
        std::istringstream is(next_line());
        std::string kw;
        if (!(is >> kw) || kw != kw_want) {
            model_fail(path, lineno, std::string("expected ") + kw_want);
        }
        out.resize(dim);
        for (size_t i = 0; i < dim; ++i) {
            if (!(is >> out[i])) model_fail(path, lineno, "short vector");
        }
    };
    read_vec("norm_min", m.norm.lo);
    read_vec("norm_max", m.norm.hi);
    {
        std::istringstream is(next_line());
        std::string kw;
        size_t count = 0;
        if (!(is >> kw >> count) || kw != "classes") {
            model_fail(path, lineno, "bad classes line");
        }
        for (size_t i = 0; i < count; ++i) {
            std::string name;
            if (!(is >> name)) model_fail(path, lineno, "short class list");
            auto s = scheme_from_name(name);
            if (!s) model_fail(path, lineno, "unknown class '" + name + "'");
            m.classes.push_back(*s);
        }
    }
    size_t pairs = 0;
    {
        std::istringstream is(next_line());
        std::string kw;
        if (!(is >> kw >> pairs) || kw != "pairs") {
            model_fail(path, lineno, "bad pairs line");
        }
    }
    const size_t expected =
        m.classes.size() * (m.classes.size() - 1) / 2;
    if (pairs != expected) {
        model_fail(path, lineno, "pair count does not match class count");
    }
    for (size_t p = 0; p < pairs; ++p) {
        BinarySvmModel bm;
        bm.kernel = m.kernel;
        bm.box_c = m.box_c;
        size_t sv = 0;
        {
            std::istringstream is(next_line());
            std::string kw, a, b;
            if (!(is >> kw >> a >> b >> sv >> bm.bias) || kw != "pair") {
                model_fail(path, lineno, "bad pair header");
            }
            auto sa = scheme_from_name(a), sb = scheme_from_name(b);
            if (!sa || !sb) model_fail(path, lineno, "unknown class in pair");
            bm.positive_class = *sa;
            bm.negative_class = *sb;
        }
        for (size_t k = 0; k < sv; ++k) {
            std::istringstream is(next_line());
            double w = 0.0;
            std::vector<double> vec(dim);
            if (!(is >> w)) model_fail(path, lineno, "bad support-vector line");
            for (size_t i = 0; i < dim; ++i) {
                if (!(is >> vec[i])) model_fail(path, lineno, "short support vector");
            }
            bm.signed_weights.push_back(w);
            bm.support_vectors.push_back(std::move(vec));
        }
        m.pair_models.push_back(std::move(bm));
    }
    if (next_line() != "end") model_fail(path, lineno, "missing end marker");
    return m;
}

}  // namespace amc
