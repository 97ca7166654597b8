#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "elsa/inference.hpp"

namespace elsa {

/// Thrown by the conventional test when no anchor heard the target;
/// its likelihood ratio is an empty product.
class NoAudibleAnchorsError : public std::runtime_error {
public:
    NoAudibleAnchorsError() : std::runtime_error("no audible anchors: conventional GLRT undefined") {}
};

/// Log-likelihood contributions of one anchor at the two MAP plug-ins.
/// Delay entries are 0 for inaudible anchors; audibility entries are 0
/// for the conventional detector.
struct PerAnchorTerms {
    double delay_h0 = 0.0;
    double delay_h1 = 0.0;
    double aud_h0 = 0.0;
    double aud_h1 = 0.0;
};

struct DetectionOutcome {
    double log_lambda = 0.0;
    double threshold_log_eta = 0.0;
    bool spoofing_detected = false;
    MapEstimate map_h0;
    MapEstimate map_h1;
    std::vector<PerAnchorTerms> per_anchor_terms;
};

/// Audibility-aware GLRT: MAP location estimate under each hypothesis
/// (audibility factors included), then
/// log Lambda = log L(H1 at its MAP) - log L(H0 at its MAP).
/// Spoofing is declared iff log Lambda > log_eta.
DetectionOutcome elsa_detect(const ObservationVector& obs, double log_eta,
                             const GridSpec& grid, const ChannelParams& ch,
                             const TimingParams& tm, const AttackParams& atk);

/// Delay-only baseline: same pipeline with the audibility factors
/// masked from both the MAP objective and the ratio. Throws
/// NoAudibleAnchorsError when nothing was heard.
DetectionOutcome conventional_detect(const ObservationVector& obs, double log_eta,
                                     const GridSpec& grid, const ChannelParams& ch,
                                     const TimingParams& tm, const AttackParams& atk);

/// Prepared-grid variants for repeated detections over one geometry.
DetectionOutcome elsa_detect(const ObservationVector& obs, double log_eta,
                             const LikelihoodGrid& engine);
DetectionOutcome conventional_detect(const ObservationVector& obs, double log_eta,
                                     const LikelihoodGrid& engine);

/// Both detectors from a single lattice sweep. The conventional result
/// is absent instead of throwing when no anchor is audible.
struct DetectionPair {
    DetectionOutcome elsa;
    std::optional<DetectionOutcome> conventional;
};
DetectionPair detect_both(const ObservationVector& obs, double log_eta,
                          const LikelihoodGrid& engine);

}  // namespace elsa
