#include "lohe/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>

namespace lohe {

namespace {

constexpr std::size_t kMinFitSamples = 10;
constexpr double kBoundRelSlack = 1e-6;
constexpr double kDerivativeSlack = 1e-8;
// Ratios -V'/V are taken only where V exceeds this fraction of V(T).
constexpr double kRatioRelFloor = 1e-6;

std::string format_double(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

}  // namespace

double sync_diameter(const StateMatrix& state) {
    const Matrix& r = state.matrix();
    double best = 0.0;
    for (Index i = 0; i < r.rows(); ++i) {
        for (Index j = i + 1; j < r.rows(); ++j) best = std::max(best, (r.row(i) - r.row(j)).norm());
    }
    return best;
}

ExponentialFit fit_exponential_rate(std::span<const double> times, std::span<const double> values) {
    if (times.size() != values.size()) throw DimensionMismatch("times and values differ in length");
    std::vector<double> ts, ys;
    for (std::size_t p = 0; p < times.size(); ++p) {
        if (values[p] > kValueFloor && std::isfinite(values[p])) {
            ts.push_back(times[p]);
            ys.push_back(std::log(values[p]));
        }
    }
    if (ts.size() < kMinFitSamples) {
        throw InsufficientData("need at least " + std::to_string(kMinFitSamples) + " samples above " +
                               format_double(kValueFloor) + ", got " + std::to_string(ts.size()));
    }

    const auto n = static_cast<double>(ts.size());
    double t_mean = 0.0, y_mean = 0.0;
    for (std::size_t p = 0; p < ts.size(); ++p) {
        t_mean += ts[p];
        y_mean += ys[p];
    }
    t_mean /= n;
    y_mean /= n;

    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t p = 0; p < ts.size(); ++p) {
        const double dt = ts[p] - t_mean, dy = ys[p] - y_mean;
        sxx += dt * dt;
        sxy += dt * dy;
        syy += dy * dy;
    }
    if (sxx <= 0.0) throw InsufficientData("all samples share one time instant");

    ExponentialFit fit;
    fit.samples = ts.size();
    const auto [lo, hi] = std::minmax_element(ys.begin(), ys.end());
    if (*lo == *hi) {
        fit.rate = 0.0;
        fit.intercept = ys.front();
        fit.r2 = 0.0;
        return fit;
    }
    fit.rate = sxy / sxx;
    fit.intercept = y_mean - fit.rate * t_mean;
    fit.r2 = std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0);
    return fit;
}

double theoretical_rate(const Digraph& g, const BetaWeights& beta, const LemmaConstants& lc, double k,
                        double eta) {
    if (!(eta > 0.0 && eta < 1.0)) throw ValidationError("eta must lie in (0, 1)");
    if (beta.block_count() != 1 || beta.size() != g.size()) {
        throw NotStronglyConnected("closed-form rate needs a strongly connected digraph");
    }
    return k * (1.0 - eta) * beta.beta_min * lc.c_hat / (2.0 * beta.beta_max * beta.beta_max);
}

void RegionSpec::validate() const {
    if (!(eta > 0.0 && eta < 1.0)) throw ValidationError("eta must lie in (0, 1)");
}

RegionMembership region_membership(const ErrorMatrix& e, const RegionSpec& spec) {
    return {e.max_entry() <= spec.eta, total_error(e, spec.beta) < spec.psi_level()};
}

std::string to_string(CertificateStatus s) {
    switch (s) {
        case CertificateStatus::pass: return "pass";
        case CertificateStatus::fail: return "fail";
        case CertificateStatus::never_entered: return "never_entered";
    }
    return "unknown";
}

std::string DecayReport::serialize() const {
    std::ostringstream os;
    os << "fitted_rate=" << format_double(fitted_rate) << '\n';
    os << "fit_r2=" << format_double(fit_r2) << '\n';
    os << "fitted_intercept=" << format_double(fitted_intercept) << '\n';
    os << "theoretical_rate=" << (theoretical_rate ? format_double(*theoretical_rate) : "none") << '\n';
    os << "empirical_rate=" << (empirical_rate ? format_double(*empirical_rate) : "none") << '\n';
    os << "certificate=" << to_string(status) << '\n';
    os << "entry_time=" << (first_entry_time ? format_double(*first_entry_time) : "none") << '\n';
    os << "epsilon=" << format_double(epsilon) << '\n';
    if (!detail.empty()) os << "detail=" << detail << '\n';
    return os.str();
}

std::vector<double> total_error_series(const Trajectory& traj, const BetaWeights& beta) {
    std::vector<double> v;
    v.reserve(traj.size());
    for (const auto& s : traj.states) v.push_back(total_error(error_from_states(s), beta));
    return v;
}

DecayReport decay_certificate(const Trajectory& traj, const Digraph& g, const Condensation& c, double k,
                              const RegionSpec& spec) {
    spec.validate();
    if (traj.size() == 0) throw InsufficientData("empty trajectory");
    if (traj.states.front().m() != g.size() || spec.beta.size() != g.size()) {
        throw DimensionMismatch("trajectory, digraph and beta disagree on the node count");
    }
    for (std::size_t p = 1; p < traj.size(); ++p) {
        if (traj.times[p] - traj.times[p - 1] > kMaxCertificateSpacing * (1.0 + 1e-9)) {
            throw ValidationError("sample spacing exceeds " + format_double(kMaxCertificateSpacing) +
                                  "; lower record_every or dt");
        }
    }

    DecayReport report;
    report.epsilon = spec.beta.epsilon;
    const std::vector<double> v = total_error_series(traj, spec.beta);
    const double level = spec.psi_level();
    const std::size_t n = v.size();

    std::size_t entry = n;
    for (std::size_t p = 0; p < n; ++p) {
        if (v[p] < level) {
            entry = p;
            break;
        }
    }
    if (spec.beta.block_count() == 1) {
        report.theoretical_rate = theoretical_rate(g, spec.beta, lemma_constants(g, c), k, spec.eta);
    }
    if (entry == n) {
        report.status = CertificateStatus::never_entered;
        report.detail = "total error never dropped below " + format_double(level);
        return report;
    }
    const double t_entry = traj.times[entry];
    report.first_entry_time = t_entry;

    std::vector<std::string> failures;

    // (a) positive invariance
    for (std::size_t p = entry; p < n; ++p) {
        if (!(v[p] < level)) {
            failures.push_back("left Psi_eta at t=" + format_double(traj.times[p]));
            break;
        }
    }

    // (b) closed-form envelope
    if (report.theoretical_rate) {
        const double rate = *report.theoretical_rate;
        for (std::size_t p = entry; p < n; ++p) {
            const double bound = v[entry] * std::exp(-rate * (traj.times[p] - t_entry)) * (1.0 + kBoundRelSlack);
            if (v[p] > bound) {
                failures.push_back("exceeded closed-form envelope at t=" + format_double(traj.times[p]));
                break;
            }
        }
    }

    // (c) differential inequality with an empirical rate
    const double ratio_floor = std::max(kValueFloor, kRatioRelFloor * v[entry]);
    std::optional<double> min_ratio;
    std::vector<std::pair<double, double>> derivs;  // (V', V)
    for (std::size_t p = entry + 1; p + 1 < n; ++p) {
        const double d = (v[p + 1] - v[p - 1]) / (traj.times[p + 1] - traj.times[p - 1]);
        derivs.emplace_back(d, v[p]);
        if (v[p] > ratio_floor) min_ratio = std::min(min_ratio.value_or(-d / v[p]), -d / v[p]);
    }
    if (min_ratio) {
        const double c_fit = *min_ratio;
        report.empirical_rate = c_fit;
        if (!(c_fit > 0.0)) {
            failures.push_back("no positive rate c with V' <= -c V after entry");
        } else {
            for (const auto& [d, val] : derivs) {
                if (d > -c_fit * val + kDerivativeSlack) {
                    failures.push_back("V' <= -c V violated beyond slack");
                    break;
                }
            }
        }
    }

    // Fit on the post-entry window.
    std::span<const double> ts(traj.times.data() + entry, n - entry);
    std::span<const double> vs(v.data() + entry, n - entry);
    try {
        const ExponentialFit fit = fit_exponential_rate(ts, vs);
        report.fitted_rate = fit.rate;
        report.fitted_intercept = fit.intercept;
        report.fit_r2 = fit.r2;
    } catch (const InsufficientData&) {
        if (std::any_of(vs.begin(), vs.end(), [](double x) { return x <= kValueFloor; })) {
            // Reached round-off level before ten samples: faster than any fit can resolve.
            report.fitted_rate = -std::numeric_limits<double>::infinity();
            report.fitted_intercept = 0.0;
            report.fit_r2 = 0.0;
        } else {
            failures.push_back("too few post-entry samples to fit a rate");
        }
    }
    if (!(report.fitted_rate < 0.0)) failures.push_back("fitted rate is not negative");

    if (failures.empty()) {
        report.status = CertificateStatus::pass;
        report.certificate_passed = true;
    } else {
        report.status = CertificateStatus::fail;
        report.detail = failures.front();
    }
    return report;
}

EpsilonSearchResult epsilon_search(const Trajectory& traj, const Digraph& g, const Condensation& c, double k,
                                   double eta, double epsilon0) {
    if (!has_spanning_tree(c)) throw NoSpanningTree("digraph has no directed spanning tree");
    double eps = epsilon0;
    DecayReport last;
    for (int j = 0; j <= kEpsilonHalvings; ++j, eps *= 0.5) {
        RegionSpec spec{eta, beta_weights(c, g, eps)};
        last = decay_certificate(traj, g, c, k, spec);
        if (last.certificate_passed) return {eps, last};
        if (c.block_count() == 1) break;  // epsilon plays no role
    }
    throw NoFeasibleEpsilon("no epsilon certified exponential decay (last: certificate=" + to_string(last.status) +
                                (last.detail.empty() ? "" : ", " + last.detail) + ")",
                            last);
}

}  // namespace lohe
