#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "elsa/detector.hpp"

namespace elsa {

/// How a campaign picks each trial's true target location.
struct TargetPolicy {
    enum class Kind {
        kFixed,                    // every trial at one location
        kUniform,                  // uniform over the region
        kUniformWithAudibleCount,  // uniform, rejection-sampled so that
                                   // exactly `audible_count` anchors lie
                                   // within the deterministic audible
                                   // radius (mean RSS >= lambda)
    };
    Kind kind = Kind::kUniform;
    Location fixed;
    int audible_count = 0;

    static TargetPolicy fixed_at(const Location& loc) {
        return TargetPolicy{Kind::kFixed, loc, 0};
    }
    static TargetPolicy uniform() { return TargetPolicy{}; }
    static TargetPolicy uniform_with_audible_count(int k) {
        return TargetPolicy{Kind::kUniformWithAudibleCount, Location{}, k};
    }
};

/// Distance at which the mean received power equals the sensitivity
/// threshold; inside it an anchor is audible with probability > 1/2.
double audible_radius_m(const ChannelParams& ch);

struct CampaignScenario {
    Region region;
    std::vector<Location> anchors;
    TargetPolicy target_policy;
    ChannelParams channel;
    TimingParams timing;
    AttackParams attack;
    GridSpec grid;

    void validate() const;
};

struct TrialRecord {
    std::int64_t trial_id = 0;
    std::uint64_t seed = 0;
    Location true_location;
    bool attacked = false;
    double log_lambda_elsa = 0.0;
    std::optional<double> log_lambda_conventional;  // absent when nothing was audible
    int n_audible = 0;
    // Extra context consumed by the report writers.
    std::vector<bool> audible_mask;
    Location elsa_map_h1;
};

/// Run n_trials independent simulate/attack/detect rounds. Every trial
/// draws from its own substream of root_seed, so the result is
/// bit-identical for a fixed seed regardless of thread count.
/// n_threads = 0 picks the hardware concurrency.
std::vector<TrialRecord> run_campaign(const CampaignScenario& scenario, int n_trials,
                                      bool attacked, std::uint64_t root_seed,
                                      int n_threads = 0);

enum class DetectorTag { kElsa, kConventional };

/// Pull one detector's log-ratio values out of trial records. Missing
/// values (conventional with zero audible anchors) are either dropped
/// or mapped to -inf ("never detects"), per missing_as_never_detect.
std::vector<double> extract_log_lambdas(const std::vector<TrialRecord>& records,
                                        DetectorTag tag, bool missing_as_never_detect,
                                        int* n_dropped = nullptr);

struct RocPoint {
    double false_alarm_rate = 0.0;
    double detection_rate = 0.0;
    double log_eta = 0.0;
};

struct RocCurve {
    std::vector<RocPoint> points;  // false alarm non-decreasing
    std::string detector_tag;
    int dropped_honest = 0;
    int dropped_attacked = 0;
};

/// Empirical ROC: every observed log-ratio value is a candidate
/// threshold; detection means log Lambda > log eta. Trials without the
/// requested detector's value are dropped and counted.
RocCurve build_roc(const std::vector<TrialRecord>& honest,
                   const std::vector<TrialRecord>& attacked, DetectorTag tag);

RocCurve build_roc_from_values(std::vector<double> honest, std::vector<double> attacked,
                               std::string detector_tag, int dropped_honest = 0,
                               int dropped_attacked = 0);

/// Trapezoidal area under the curve, in [0, 1].
double auc(const RocCurve& curve);

struct OperatingPoint {
    double detection_rate = 0.0;
    double realized_false_alarm_rate = 0.0;
    double log_eta = 0.0;
};

/// Detection rate at a false-alarm budget: the threshold is the
/// empirical (1 - pf) quantile of the honest values.
OperatingPoint pd_at_pf(const std::vector<double>& honest,
                        const std::vector<double>& attacked, double pf_target);

inline constexpr double kXiCertificateTolerance = 1e-9;

/// Audibility-only additive component of the audibility-aware log
/// statistic for one configuration (location estimate, anchor set,
/// audibility pattern). Non-positive whenever mu_delta > 0, which is
/// what makes the audibility-aware test dominate the delay-only one.
struct XiReport {
    double xi = 0.0;
    int n_audible = 0;
    std::vector<double> shifted_distances_m;
    bool certificate = false;  // xi <= kXiCertificateTolerance
};

/// shift_sign is a test hook: -1 flips the distance shifts and must
/// break the certificate; leave it at +1.
XiReport xi_term(const Location& theta_hat, const std::vector<Location>& anchors,
                 const std::vector<bool>& audible, const ChannelParams& ch,
                 const TimingParams& tm, const AttackParams& atk,
                 double shift_sign = 1.0);

/// Randomized numerical certification that xi stays non-positive:
/// geometry, audibility pattern and channel/attack parameters are drawn
/// around their reference values and xi_term is evaluated for each.
struct XiCertifyOptions {
    int n_samples = 10000;
    std::uint64_t root_seed = 7;
    Region region{0.0, 100.0, 0.0, 100.0};
    int n_anchors_min = 1;
    int n_anchors_max = 8;
    double parameter_factor = 4.0;            // sample within x/÷ this factor
    std::optional<double> fixed_mu_delta_s;   // sample log-uniform when absent
    double shift_sign = 1.0;                  // test hook, see xi_term
};

struct XiSample {
    int sample_id = 0;
    Location theta_hat;
    std::vector<Location> anchors;
    std::vector<bool> audible;
    ChannelParams channel;
    TimingParams timing;
    AttackParams attack;
    XiReport report;
};

struct XiCertification {
    std::vector<XiSample> samples;
    int n_failed = 0;
    bool all_certified = false;
};

XiCertification certify_xi(const XiCertifyOptions& opt);

/// Reduced sufficient statistic of the delay-only test at a fixed
/// plug-in location: sum over audible anchors of
/// sigma_delta^2 t^2 + 2 mu_delta sigma_w^2 t - 2 sigma_delta^2 psi t.
double z_statistic(const ObservationVector& obs, const Location& theta,
                   const TimingParams& tm, const AttackParams& atk);

/// Threshold in Z units equivalent to comparing the fixed-location
/// delay-only log ratio against log_eta.
double z_gamma_threshold(const ObservationVector& obs, const Location& theta,
                         double log_eta, const TimingParams& tm,
                         const AttackParams& atk);

/// Log likelihood ratio with the same location plugged into both
/// hypotheses (no MAP re-estimation), optionally with the audibility
/// factors. This is the fixed-psi regime of the dominance analysis.
double fixed_theta_log_ratio(const ObservationVector& obs, const Location& theta,
                             const ChannelParams& ch, const TimingParams& tm,
                             const AttackParams& atk, bool with_audibility);

}  // namespace elsa
