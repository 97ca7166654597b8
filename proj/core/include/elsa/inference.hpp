#pragma once

#include <functional>
#include <vector>

#include "elsa/adversary.hpp"
#include "elsa/model.hpp"

namespace elsa {

enum class Hypothesis {
    kNoSpoofing,  // H0: delays centered on d/v_p
    kSpoofing,    // H1: delays shifted by the attack, variance inflated
};

/// Search lattice for the MAP location estimate. Nodes sit at
/// region min + k*step on each axis, borders included.
struct GridSpec {
    Region region;
    double step_m = 1.0;

    int nx() const;
    int ny() const;
    Location node(int ix, int iy) const;
    void validate() const;  // requires step > 0 and at least 2x2 nodes
};

struct MapEstimate {
    Location location;
    double log_posterior = 0.0;
    Hypothesis hypothesis = Hypothesis::kNoSpoofing;
};

/// log p(t_i | r_i = 1, theta, H). Under H0 the density is
/// N(t; d/v_p, sigma_w^2); under H1 the injected delay is marginalized
/// out, N(t; d/v_p + mu_delta, sigma_w^2 + sigma_delta^2).
double log_likelihood_delay(double t_s, double d_m, Hypothesis hyp,
                            const TimingParams& tm, const AttackParams& atk);

/// log P(r_i | theta, H). Under H1 the audibility probabilities are
/// evaluated at attack-shifted distances: d + mu_delta*v_p for an
/// audible anchor, (d - mu_delta*v_p) clamped to the distance floor for
/// an inaudible one.
double log_audibility_term(bool audible, double d_m, Hypothesis hyp,
                           const ChannelParams& ch, const AttackParams& atk,
                           const TimingParams& tm);

/// Joint log density of (t, r, theta) under a hypothesis with a uniform
/// prior over `prior`: delay terms over audible anchors, audibility
/// terms over all anchors, plus log(1/area). -inf outside the prior.
double log_joint(const ObservationVector& obs, const Location& theta,
                 Hypothesis hyp, const Region& prior, const ChannelParams& ch,
                 const TimingParams& tm, const AttackParams& atk);

/// Same likelihood with an arbitrary log-prior density hook.
double log_joint_with_prior(const ObservationVector& obs, const Location& theta,
                            Hypothesis hyp, const ChannelParams& ch,
                            const TimingParams& tm, const AttackParams& atk,
                            const std::function<double(const Location&)>& log_prior);

/// Exhaustive grid search of log_joint. Ties break deterministically to
/// the lowest y, then lowest x.
MapEstimate map_estimate(const ObservationVector& obs, Hypothesis hyp,
                         const GridSpec& grid, const ChannelParams& ch,
                         const TimingParams& tm, const AttackParams& atk);

/// Grid evaluator with per-node tables precomputed once per geometry.
/// A single sweep over the lattice scores both hypotheses, with and
/// without the audibility factors, so the audibility-aware detector and
/// the delay-only baseline share one engine. Immutable after
/// construction; safe to share across threads.
class LikelihoodGrid {
public:
    LikelihoodGrid(std::vector<Location> anchors, GridSpec grid,
                   const ChannelParams& ch, const TimingParams& tm,
                   const AttackParams& atk);

    struct SearchResult {
        MapEstimate h0;             // audibility included
        MapEstimate h1;
        MapEstimate delay_only_h0;  // audibility masked (baseline)
        MapEstimate delay_only_h1;
    };

    /// One sweep, all four objectives. obs.anchors must match the
    /// anchors the grid was built with.
    SearchResult search(const ObservationVector& obs) const;

    /// Audibility-included search for one hypothesis.
    MapEstimate search_map(const ObservationVector& obs, Hypothesis hyp) const;

    const std::vector<Location>& anchors() const { return anchors_; }
    const GridSpec& grid() const { return grid_; }
    const ChannelParams& channel() const { return ch_; }
    const TimingParams& timing() const { return tm_; }
    const AttackParams& attack() const { return atk_; }
    double log_prior() const { return log_prior_; }

private:
    struct NodeAnchor {
        double psi_s;    // d/v_p
        double la0_r1;   // log P(r=1 | node, H0)
        double la0_r0;   // log P(r=0 | node, H0)
        double la1_r1;   // log P(r=1 | node, H1)
        double la1_r0;   // log P(r=0 | node, H1)
    };

    std::vector<Location> anchors_;
    GridSpec grid_;
    ChannelParams ch_;
    TimingParams tm_;
    AttackParams atk_;
    double log_prior_;
    double inv_two_var0_;   // 1/(2 sigma_w^2)
    double inv_two_var1_;   // 1/(2 (sigma_w^2 + sigma_delta^2))
    double log_norm_c0_;    // -0.5 log(2 pi sigma_w^2)
    double log_norm_c1_;
    std::vector<NodeAnchor> tab_;  // node-major, nx*ny*n_anchors
};

}  // namespace elsa
