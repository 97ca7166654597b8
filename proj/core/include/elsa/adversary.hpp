#pragma once

#include <cstdint>

#include "elsa/model.hpp"

namespace elsa {

/// Gaussian delay-injection attack on the ranging replies.
struct AttackParams {
    double mu_delta_s = 0.0;     // mean injected delay
    double sigma_delta_s = 0.0;  // injected delay standard deviation
    bool positive_only = false;  // use |delta| draws

    void validate() const;
};

/// Mean injected delay expressed as a distance, mu_delta * v_p.
double equivalent_distance_m(const AttackParams& atk, const TimingParams& tm);

/// Add an i.i.d. delay to every audible anchor's measurement. Anchor i
/// draws from substream i of rng_seed. Audibility flags, RSS values and
/// anchor positions are untouched; the attacker perturbs timing only.
ObservationVector inject_attack(const ObservationVector& honest,
                                const AttackParams& atk,
                                std::uint64_t rng_seed);

}  // namespace elsa
