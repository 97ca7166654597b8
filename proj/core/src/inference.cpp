#include "elsa/inference.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "elsa/math.hpp"

namespace elsa {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kHalfLog2Pi = 0.9189385332046727417803297;
}  // namespace

int GridSpec::nx() const {
    return static_cast<int>(std::floor((region.x_max - region.x_min) / step_m + 1e-9)) + 1;
}

int GridSpec::ny() const {
    return static_cast<int>(std::floor((region.y_max - region.y_min) / step_m + 1e-9)) + 1;
}

Location GridSpec::node(int ix, int iy) const {
    return Location{region.x_min + ix * step_m, region.y_min + iy * step_m};
}

void GridSpec::validate() const {
    region.validate();
    if (!(step_m > 0.0)) throw std::invalid_argument("GridSpec: step must be > 0");
    if (nx() < 2 || ny() < 2)
        throw std::invalid_argument("GridSpec: need at least a 2x2 lattice");
}

double log_likelihood_delay(double t_s, double d_m, Hypothesis hyp,
                            const TimingParams& tm, const AttackParams& atk) {
    const double psi = d_m / tm.v_p_mps;
    if (hyp == Hypothesis::kNoSpoofing) {
        return log_norm_pdf(t_s, psi, tm.sigma_w_s * tm.sigma_w_s);
    }
    const double var = tm.sigma_w_s * tm.sigma_w_s + atk.sigma_delta_s * atk.sigma_delta_s;
    return log_norm_pdf(t_s, psi + atk.mu_delta_s, var);
}

double log_audibility_term(bool audible, double d_m, Hypothesis hyp,
                           const ChannelParams& ch, const AttackParams& atk,
                           const TimingParams& tm) {
    const double shift = hyp == Hypothesis::kSpoofing ? equivalent_distance_m(atk, tm) : 0.0;
    if (audible) {
        return log_norm_cdf(-audibility_argument(d_m + shift, ch));
    }
    const double dm = std::max(d_m - shift, kDistanceFloorM);
    return log_norm_cdf(audibility_argument(dm, ch));
}

namespace {

// Delay sum then audibility sum, each in anchor order; the prepared
// grid accumulates the same way so the two paths agree closely.
double log_likelihood_terms(const ObservationVector& obs, const Location& theta,
                            Hypothesis hyp, const ChannelParams& ch,
                            const TimingParams& tm, const AttackParams& atk) {
    double sum_delay = 0.0;
    for (std::size_t i = 0; i < obs.size(); ++i) {
        if (!obs.obs[i].audible) continue;
        const double d = distance(theta, obs.anchors[i]);
        sum_delay += log_likelihood_delay(*obs.obs[i].delay_s, d, hyp, tm, atk);
    }
    double sum_aud = 0.0;
    for (std::size_t i = 0; i < obs.size(); ++i) {
        const double d = distance(theta, obs.anchors[i]);
        sum_aud += log_audibility_term(obs.obs[i].audible, d, hyp, ch, atk, tm);
    }
    return sum_delay + sum_aud;
}

}  // namespace

double log_joint(const ObservationVector& obs, const Location& theta,
                 Hypothesis hyp, const Region& prior, const ChannelParams& ch,
                 const TimingParams& tm, const AttackParams& atk) {
    if (!prior.contains(theta)) return kNegInf;
    return log_likelihood_terms(obs, theta, hyp, ch, tm, atk) - std::log(prior.area());
}

double log_joint_with_prior(const ObservationVector& obs, const Location& theta,
                            Hypothesis hyp, const ChannelParams& ch,
                            const TimingParams& tm, const AttackParams& atk,
                            const std::function<double(const Location&)>& log_prior) {
    const double lp = log_prior(theta);
    if (lp == kNegInf) return kNegInf;
    return log_likelihood_terms(obs, theta, hyp, ch, tm, atk) + lp;
}

MapEstimate map_estimate(const ObservationVector& obs, Hypothesis hyp,
                         const GridSpec& grid, const ChannelParams& ch,
                         const TimingParams& tm, const AttackParams& atk) {
    const LikelihoodGrid engine(obs.anchors, grid, ch, tm, atk);
    return engine.search_map(obs, hyp);
}

LikelihoodGrid::LikelihoodGrid(std::vector<Location> anchors, GridSpec grid,
                               const ChannelParams& ch, const TimingParams& tm,
                               const AttackParams& atk)
    : anchors_(std::move(anchors)), grid_(grid), ch_(ch), tm_(tm), atk_(atk) {
    grid_.validate();
    ch.validate();
    tm.validate();
    atk.validate();
    if (anchors_.empty()) throw std::invalid_argument("LikelihoodGrid: no anchors");

    log_prior_ = -std::log(grid_.region.area());
    const double var0 = tm.sigma_w_s * tm.sigma_w_s;
    const double var1 = var0 + atk.sigma_delta_s * atk.sigma_delta_s;
    inv_two_var0_ = 1.0 / (2.0 * var0);
    inv_two_var1_ = 1.0 / (2.0 * var1);
    log_norm_c0_ = -0.5 * std::log(var0) - kHalfLog2Pi;
    log_norm_c1_ = -0.5 * std::log(var1) - kHalfLog2Pi;

    const int nx = grid_.nx();
    const int ny = grid_.ny();
    const std::size_t na = anchors_.size();
    const double shift = equivalent_distance_m(atk, tm);
    tab_.resize(static_cast<std::size_t>(nx) * ny * na);
    std::size_t k = 0;
    for (int iy = 0; iy < ny; ++iy) {
        for (int ix = 0; ix < nx; ++ix) {
            const Location p = grid_.node(ix, iy);
            for (std::size_t a = 0; a < na; ++a, ++k) {
                const double d = distance(p, anchors_[a]);
                NodeAnchor& na_entry = tab_[k];
                na_entry.psi_s = d / tm.v_p_mps;
                na_entry.la0_r1 = log_norm_cdf(-audibility_argument(d, ch));
                na_entry.la0_r0 = log_norm_cdf(audibility_argument(d, ch));
                na_entry.la1_r1 = log_norm_cdf(-audibility_argument(d + shift, ch));
                const double dm = std::max(d - shift, kDistanceFloorM);
                na_entry.la1_r0 = log_norm_cdf(audibility_argument(dm, ch));
            }
        }
    }
}

LikelihoodGrid::SearchResult LikelihoodGrid::search(const ObservationVector& obs) const {
    if (obs.anchors.size() != anchors_.size())
        throw std::invalid_argument("LikelihoodGrid: anchor count mismatch");
    const std::size_t na = anchors_.size();

    // Flatten the per-anchor inputs checked once up front.
    std::vector<char> audible(na);
    std::vector<double> t(na, 0.0);
    int n_audible = 0;
    for (std::size_t a = 0; a < na; ++a) {
        if (!(obs.anchors[a] == anchors_[a]))
            throw std::invalid_argument("LikelihoodGrid: anchor positions differ");
        audible[a] = obs.obs[a].audible ? 1 : 0;
        if (audible[a]) {
            t[a] = *obs.obs[a].delay_s;
            ++n_audible;
        }
    }

    struct Best {
        double v = kNegInf;
        int ix = 0, iy = 0;
        void consider(double cand, int x, int y) {
            if (cand > v) {
                v = cand;
                ix = x;
                iy = y;
            }
        }
    };
    Best b_e0, b_e1, b_c0, b_c1;

    const int nx = grid_.nx();
    const int ny = grid_.ny();
    const NodeAnchor* row = tab_.data();
    const double mu = atk_.mu_delta_s;
    for (int iy = 0; iy < ny; ++iy) {
        for (int ix = 0; ix < nx; ++ix, row += na) {
            double d0 = 0.0, d1 = 0.0, a0 = 0.0, a1 = 0.0;
            for (std::size_t a = 0; a < na; ++a) {
                const NodeAnchor& e = row[a];
                if (audible[a]) {
                    const double r0 = t[a] - e.psi_s;
                    const double r1 = t[a] - (e.psi_s + mu);
                    d0 -= r0 * r0 * inv_two_var0_;
                    d1 -= r1 * r1 * inv_two_var1_;
                    a0 += e.la0_r1;
                    a1 += e.la1_r1;
                } else {
                    a0 += e.la0_r0;
                    a1 += e.la1_r0;
                }
            }
            b_e0.consider(d0 + a0, ix, iy);
            b_e1.consider(d1 + a1, ix, iy);
            b_c0.consider(d0, ix, iy);
            b_c1.consider(d1, ix, iy);
        }
    }

    // Per-audible-anchor normalization constants and the prior are flat
    // over the lattice; fold them in after the sweep.
    const double const0 = n_audible * log_norm_c0_ + log_prior_;
    const double const1 = n_audible * log_norm_c1_ + log_prior_;
    SearchResult res;
    res.h0 = MapEstimate{grid_.node(b_e0.ix, b_e0.iy), b_e0.v + const0,
                         Hypothesis::kNoSpoofing};
    res.h1 = MapEstimate{grid_.node(b_e1.ix, b_e1.iy), b_e1.v + const1,
                         Hypothesis::kSpoofing};
    res.delay_only_h0 = MapEstimate{grid_.node(b_c0.ix, b_c0.iy), b_c0.v + const0,
                                    Hypothesis::kNoSpoofing};
    res.delay_only_h1 = MapEstimate{grid_.node(b_c1.ix, b_c1.iy), b_c1.v + const1,
                                    Hypothesis::kSpoofing};
    return res;
}

MapEstimate LikelihoodGrid::search_map(const ObservationVector& obs, Hypothesis hyp) const {
    const SearchResult res = search(obs);
    return hyp == Hypothesis::kNoSpoofing ? res.h0 : res.h1;
}

}  // namespace elsa
