#include "elsa/adversary.hpp"

#include <cmath>
#include <stdexcept>

#include "elsa/rng.hpp"

namespace elsa {

void AttackParams::validate() const {
    if (sigma_delta_s < 0.0)
        throw std::invalid_argument("AttackParams: sigma_delta must be >= 0");
}

double equivalent_distance_m(const AttackParams& atk, const TimingParams& tm) {
    return atk.mu_delta_s * tm.v_p_mps;
}

ObservationVector inject_attack(const ObservationVector& honest,
                                const AttackParams& atk,
                                std::uint64_t rng_seed) {
    honest.validate();
    ObservationVector out = honest;
    for (std::size_t i = 0; i < out.obs.size(); ++i) {
        if (!out.obs[i].audible) continue;
        Rng rng(substream_seed(rng_seed, i));
        double delta = rng.gaussian(atk.mu_delta_s, atk.sigma_delta_s);
        if (atk.positive_only) delta = std::fabs(delta);
        *out.obs[i].delay_s += delta;
    }
    return out;
}

}  // namespace elsa
