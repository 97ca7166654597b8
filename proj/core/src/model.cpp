#include "elsa/model.hpp"

#include <cmath>
#include <stdexcept>

#include "elsa/math.hpp"
#include "elsa/rng.hpp"

namespace elsa {

void Region::validate() const {
    if (!(x_min < x_max) || !(y_min < y_max))
        throw std::invalid_argument("Region: require x_min < x_max and y_min < y_max");
    if (!std::isfinite(x_min) || !std::isfinite(x_max) || !std::isfinite(y_min) ||
        !std::isfinite(y_max))
        throw std::invalid_argument("Region: bounds must be finite");
}

void ChannelParams::validate() const {
    if (!(alpha > 0.0)) throw std::invalid_argument("ChannelParams: alpha must be > 0");
    if (!(d_0_m > 0.0)) throw std::invalid_argument("ChannelParams: d_0 must be > 0");
    if (!(sigma_eps_dbm > 0.0))
        throw std::invalid_argument("ChannelParams: sigma_eps must be > 0");
}

void TimingParams::validate() const {
    if (!(v_p_mps > 0.0)) throw std::invalid_argument("TimingParams: v_p must be > 0");
    if (!(sigma_w_s > 0.0)) throw std::invalid_argument("TimingParams: sigma_w must be > 0");
}

double distance(const Location& a, const Location& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return std::sqrt(dx * dx + dy * dy);
}

double mean_rss(double d, const ChannelParams& ch) {
    if (d < 0.0) throw std::invalid_argument("mean_rss: negative distance");
    const double dc = d < kDistanceFloorM ? kDistanceFloorM : d;
    return ch.p_t_dbm - 10.0 * ch.alpha * std::log10(dc / ch.d_0_m);
}

double audibility_argument(double d, const ChannelParams& ch) {
    if (d < 0.0) throw std::invalid_argument("audibility_argument: negative distance");
    const double dc = d < kDistanceFloorM ? kDistanceFloorM : d;
    return (ch.lambda_dbm - ch.p_t_dbm + 10.0 * ch.alpha * std::log10(dc / ch.d_0_m)) /
           ch.sigma_eps_dbm;
}

double audibility_probability(double d, const ChannelParams& ch) {
    return norm_cdf(-audibility_argument(d, ch));
}

void Observation::validate() const {
    if (audible != delay_s.has_value())
        throw std::invalid_argument("Observation: delay present iff audible");
    if (audible != rss_dbm.has_value())
        throw std::invalid_argument("Observation: rss present iff audible");
    if (delay_s && !std::isfinite(*delay_s))
        throw std::invalid_argument("Observation: delay must be finite");
}

int ObservationVector::audible_count() const {
    int n = 0;
    for (const auto& o : obs) n += o.audible ? 1 : 0;
    return n;
}

void ObservationVector::validate() const {
    if (anchors.empty()) throw std::invalid_argument("ObservationVector: no anchors");
    if (anchors.size() != obs.size())
        throw std::invalid_argument("ObservationVector: anchors/obs length mismatch");
    for (std::size_t i = 0; i < anchors.size(); ++i)
        for (std::size_t j = i + 1; j < anchors.size(); ++j)
            if (anchors[i] == anchors[j])
                throw std::invalid_argument("ObservationVector: duplicate anchor position");
    for (const auto& o : obs) o.validate();
}

ObservationVector simulate_observation(const Location& target,
                                       const std::vector<Location>& anchors,
                                       const ChannelParams& ch,
                                       const TimingParams& tm,
                                       std::uint64_t rng_seed) {
    ObservationVector out;
    out.anchors = anchors;
    out.obs.reserve(anchors.size());
    for (std::size_t i = 0; i < anchors.size(); ++i) {
        Rng rng(substream_seed(rng_seed, i));
        const double d = distance(target, anchors[i]);
        const double rss = mean_rss(d, ch) + rng.gaussian(0.0, ch.sigma_eps_dbm);
        if (rss >= ch.lambda_dbm) {
            const double t = d / tm.v_p_mps + rng.gaussian(0.0, tm.sigma_w_s);
            out.obs.push_back(Observation::heard(t, rss));
        } else {
            out.obs.push_back(Observation::silent());
        }
    }
    return out;
}

}  // namespace elsa
