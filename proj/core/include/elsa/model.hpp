#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace elsa {

/// 2-D point in meters.
struct Location {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Location&, const Location&) = default;
};

/// Axis-aligned rectangle, the support of the uniform location prior.
struct Region {
    double x_min = 0.0;
    double x_max = 0.0;
    double y_min = 0.0;
    double y_max = 0.0;

    bool contains(const Location& p) const {
        return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max;
    }
    double area() const { return (x_max - x_min) * (y_max - y_min); }
    void validate() const;  // throws std::invalid_argument
};

/// Log-distance path loss channel with Gaussian shadowing and a
/// receiver sensitivity threshold.
struct ChannelParams {
    double p_t_dbm = -40.0;     // transmit power observed at d_0
    double alpha = 3.2;         // path loss exponent
    double d_0_m = 1.0;         // reference distance
    double sigma_eps_dbm = 0.0; // shadowing standard deviation
    double lambda_dbm = -102.0; // receiver sensitivity threshold

    void validate() const;
};

/// Propagation speed and TOA measurement noise.
struct TimingParams {
    double v_p_mps = 3.0e8;   // signal propagation speed
    double sigma_w_s = 1e-8;  // TOA noise standard deviation

    void validate() const;
};

/// Distances below this floor are clamped before any log() so that a
/// target coincident with an anchor keeps all likelihoods finite.
inline constexpr double kDistanceFloorM = 0.01;

/// Euclidean distance in meters.
double distance(const Location& a, const Location& b);

/// Mean received power in dBm at distance d (log-distance path loss).
/// d < 0 is rejected; 0 <= d < floor is clamped to the floor.
double mean_rss(double d, const ChannelParams& ch);

/// Argument of the standard-normal cdf in all audibility expressions:
/// (lambda - p_t + 10*alpha*log10(d/d_0)) / sigma_eps.
/// P(audible at distance d) = Phi(-audibility_argument(d)).
double audibility_argument(double d, const ChannelParams& ch);

/// P(received power >= lambda) at distance d; in (0,1), decreasing in d.
double audibility_probability(double d, const ChannelParams& ch);

/// One anchor's view of the target. The delay and RSS exist only when
/// the anchor heard the target; the RSS is diagnostic only and is never
/// consumed by the detectors.
struct Observation {
    bool audible = false;
    std::optional<double> delay_s;
    std::optional<double> rss_dbm;

    static Observation heard(double delay_s, double rss_dbm) {
        return Observation{true, delay_s, rss_dbm};
    }
    static Observation silent() { return Observation{}; }

    void validate() const;
};

/// Anchor positions paired with their observations, same order.
struct ObservationVector {
    std::vector<Location> anchors;
    std::vector<Observation> obs;

    std::size_t size() const { return anchors.size(); }
    int audible_count() const;

    /// Throws std::invalid_argument on length mismatch, empty vector,
    /// duplicate anchor positions, or an invalid member observation.
    void validate() const;
};

/// Simulate one ranging round: per-anchor shadowing decides audibility,
/// audible anchors return a noisy TOA delay. Anchor i draws from
/// substream i of rng_seed, so results are reproducible and independent
/// of evaluation order.
ObservationVector simulate_observation(const Location& target,
                                       const std::vector<Location>& anchors,
                                       const ChannelParams& ch,
                                       const TimingParams& tm,
                                       std::uint64_t rng_seed);

}  // namespace elsa
