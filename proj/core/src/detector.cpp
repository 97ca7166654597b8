#include "elsa/detector.hpp"

namespace elsa {

namespace {

// Terms are re-evaluated anchor by anchor at the winning nodes so the
// outcome's log_lambda is exactly the sum of its per-anchor entries.
DetectionOutcome assemble(const ObservationVector& obs, double log_eta,
                          const MapEstimate& map0, const MapEstimate& map1,
                          bool with_audibility, const ChannelParams& ch,
                          const TimingParams& tm, const AttackParams& atk) {
    DetectionOutcome out;
    out.threshold_log_eta = log_eta;
    out.map_h0 = map0;
    out.map_h1 = map1;
    out.per_anchor_terms.resize(obs.size());

    double log_lambda = 0.0;
    for (std::size_t i = 0; i < obs.size(); ++i) {
        PerAnchorTerms& terms = out.per_anchor_terms[i];
        const double d0 = distance(map0.location, obs.anchors[i]);
        const double d1 = distance(map1.location, obs.anchors[i]);
        if (obs.obs[i].audible) {
            const double t = *obs.obs[i].delay_s;
            terms.delay_h0 = log_likelihood_delay(t, d0, Hypothesis::kNoSpoofing, tm, atk);
            terms.delay_h1 = log_likelihood_delay(t, d1, Hypothesis::kSpoofing, tm, atk);
        }
        if (with_audibility) {
            terms.aud_h0 = log_audibility_term(obs.obs[i].audible, d0,
                                               Hypothesis::kNoSpoofing, ch, atk, tm);
            terms.aud_h1 = log_audibility_term(obs.obs[i].audible, d1,
                                               Hypothesis::kSpoofing, ch, atk, tm);
        }
        log_lambda += (terms.delay_h1 + terms.aud_h1) - (terms.delay_h0 + terms.aud_h0);
    }
    out.log_lambda = log_lambda;
    out.spoofing_detected = log_lambda > log_eta;
    return out;
}

}  // namespace

DetectionPair detect_both(const ObservationVector& obs, double log_eta,
                          const LikelihoodGrid& engine) {
    obs.validate();
    const LikelihoodGrid::SearchResult res = engine.search(obs);
    const ChannelParams& ch = engine.channel();
    const TimingParams& tm = engine.timing();
    const AttackParams& atk = engine.attack();

    DetectionPair pair{assemble(obs, log_eta, res.h0, res.h1, true, ch, tm, atk),
                       std::nullopt};
    if (obs.audible_count() > 0) {
        pair.conventional = assemble(obs, log_eta, res.delay_only_h0,
                                     res.delay_only_h1, false, ch, tm, atk);
    }
    return pair;
}

DetectionOutcome elsa_detect(const ObservationVector& obs, double log_eta,
                             const LikelihoodGrid& engine) {
    return detect_both(obs, log_eta, engine).elsa;
}

DetectionOutcome conventional_detect(const ObservationVector& obs, double log_eta,
                                     const LikelihoodGrid& engine) {
    DetectionPair pair = detect_both(obs, log_eta, engine);
    if (!pair.conventional) throw NoAudibleAnchorsError();
    return *pair.conventional;
}

DetectionOutcome elsa_detect(const ObservationVector& obs, double log_eta,
                             const GridSpec& grid, const ChannelParams& ch,
                             const TimingParams& tm, const AttackParams& atk) {
    const LikelihoodGrid engine(obs.anchors, grid, ch, tm, atk);
    return elsa_detect(obs, log_eta, engine);
}

DetectionOutcome conventional_detect(const ObservationVector& obs, double log_eta,
                                     const GridSpec& grid, const ChannelParams& ch,
                                     const TimingParams& tm, const AttackParams& atk) {
    const LikelihoodGrid engine(obs.anchors, grid, ch, tm, atk);
    return conventional_detect(obs, log_eta, engine);
}

}  // namespace elsa
