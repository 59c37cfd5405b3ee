#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lohe/digraph.hpp"
#include "lohe/dynamics.hpp"
#include "lohe/error_dynamics.hpp"

namespace lohe {

inline constexpr double kDefaultEta = 0.5;
/// Values below this are treated as round-off in fits and derivative checks.
inline constexpr double kValueFloor = 1e-14;
/// Largest sample spacing accepted by decay_certificate.
inline constexpr double kMaxCertificateSpacing = 1e-2;

/// Max pairwise chord length max_ij |r_i - r_j|.
double sync_diameter(const StateMatrix& state);

struct ExponentialFit {
    double rate = 0.0;       // slope of ln(value) against t
    double intercept = 0.0;  // ln(value) at t = 0
    double r2 = 0.0;
    std::size_t samples = 0;
};

/// Least squares of ln(value) on t over samples with value > kValueFloor.
/// Throws InsufficientData when fewer than 10 samples survive.
ExponentialFit fit_exponential_rate(std::span<const double> times, std::span<const double> values);

/// c = k (1 - eta) beta_min c_hat / (2 beta_max^2), strongly connected only.
double theoretical_rate(const Digraph& g, const BetaWeights& beta, const LemmaConstants& lc, double k,
                        double eta);

struct RegionSpec {
    double eta = kDefaultEta;
    BetaWeights beta;

    void validate() const;
    /// beta_min^2 eta / 2: V below this puts E in Psi_eta.
    double psi_level() const { return beta.beta_min * beta.beta_min * eta / 2.0; }
};

struct RegionMembership {
    bool in_phi = false;  // max e_ij <= eta
    bool in_psi = false;  // V(E) < beta_min^2 eta / 2
};

RegionMembership region_membership(const ErrorMatrix& e, const RegionSpec& spec);

enum class CertificateStatus { pass, fail, never_entered };

std::string to_string(CertificateStatus s);

struct DecayReport {
    double fitted_rate = 0.0;
    double fitted_intercept = 0.0;
    double fit_r2 = 0.0;
    std::optional<double> theoretical_rate;
    std::optional<double> empirical_rate;  // c_fit with V' <= -c_fit V after entry
    CertificateStatus status = CertificateStatus::never_entered;
    bool certificate_passed = false;
    std::optional<double> first_entry_time;
    double epsilon = kDefaultEpsilon;
    std::string detail;  // which check failed, empty on pass

    /// key=value block, one pair per line.
    std::string serialize() const;
};

/// Total error along a trajectory, one value per sample.
std::vector<double> total_error_series(const Trajectory& traj, const BetaWeights& beta);

/// Runs the exponential-decay checks on a recorded trajectory:
///  (a) Psi_eta is never left after the first entry time T;
///  (b) strongly connected graphs: V(t) <= V(T) exp(-c (t - T)) (1 + 1e-6)
///      with c from theoretical_rate;
///  (c) some c_fit > 0 with V' <= -c_fit V after T (centred differences),
///      taken as the smallest -V'/V over samples with V > 1e-6 V(T) and then
///      re-checked at every sample with absolute slack 1e-8.
/// Sample spacing must not exceed kMaxCertificateSpacing.
DecayReport decay_certificate(const Trajectory& traj, const Digraph& g, const Condensation& c, double k,
                              const RegionSpec& spec);

struct EpsilonSearchResult {
    double epsilon;
    DecayReport report;
};

/// Thrown when no epsilon in 0.1 * 2^-j, j = 0..20, certifies decay.
class NoFeasibleEpsilon : public Error {
public:
    NoFeasibleEpsilon(const std::string& what, DecayReport last) : Error(what), last_(std::move(last)) {}
    const DecayReport& last_report() const noexcept { return last_; }

private:
    DecayReport last_;
};

inline constexpr int kEpsilonHalvings = 20;

EpsilonSearchResult epsilon_search(const Trajectory& traj, const Digraph& g, const Condensation& c, double k,
                                   double eta = kDefaultEta, double epsilon0 = kDefaultEpsilon);

}  // namespace lohe
