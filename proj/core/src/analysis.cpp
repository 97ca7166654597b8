#include "elsa/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "elsa/math.hpp"
#include "elsa/rng.hpp"

namespace elsa {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kPosInf = std::numeric_limits<double>::infinity();
}  // namespace

double audible_radius_m(const ChannelParams& ch) {
    return ch.d_0_m * std::pow(10.0, (ch.p_t_dbm - ch.lambda_dbm) / (10.0 * ch.alpha));
}

void CampaignScenario::validate() const {
    region.validate();
    channel.validate();
    timing.validate();
    attack.validate();
    grid.validate();
    if (anchors.empty()) throw std::invalid_argument("CampaignScenario: no anchors");
    for (std::size_t i = 0; i < anchors.size(); ++i)
        for (std::size_t j = i + 1; j < anchors.size(); ++j)
            if (anchors[i] == anchors[j])
                throw std::invalid_argument("CampaignScenario: duplicate anchor");
    if (target_policy.kind == TargetPolicy::Kind::kFixed &&
        !region.contains(target_policy.fixed))
        throw std::invalid_argument("CampaignScenario: fixed target outside region");
    if (target_policy.kind == TargetPolicy::Kind::kUniformWithAudibleCount &&
        (target_policy.audible_count < 0 ||
         target_policy.audible_count > static_cast<int>(anchors.size())))
        throw std::invalid_argument("CampaignScenario: audible_count out of range");
}

namespace {

Location sample_target(const CampaignScenario& sc, Rng& rng) {
    const Region& r = sc.region;
    switch (sc.target_policy.kind) {
        case TargetPolicy::Kind::kFixed:
            return sc.target_policy.fixed;
        case TargetPolicy::Kind::kUniform:
            return Location{rng.uniform(r.x_min, r.x_max), rng.uniform(r.y_min, r.y_max)};
        case TargetPolicy::Kind::kUniformWithAudibleCount: {
            const double radius = audible_radius_m(sc.channel);
            for (int it = 0; it < 10'000'000; ++it) {
                const Location cand{rng.uniform(r.x_min, r.x_max),
                                    rng.uniform(r.y_min, r.y_max)};
                int in_range = 0;
                for (const auto& a : sc.anchors)
                    if (distance(cand, a) <= radius) ++in_range;
                if (in_range == sc.target_policy.audible_count) return cand;
            }
            throw std::runtime_error("sample_target: audible-count zone appears empty");
        }
    }
    throw std::logic_error("sample_target: bad policy");
}

}  // namespace

std::vector<TrialRecord> run_campaign(const CampaignScenario& scenario, int n_trials,
                                      bool attacked, std::uint64_t root_seed,
                                      int n_threads) {
    scenario.validate();
    if (n_trials < 1) throw std::invalid_argument("run_campaign: n_trials must be >= 1");

    const LikelihoodGrid engine(scenario.anchors, scenario.grid, scenario.channel,
                                scenario.timing, scenario.attack);
    std::vector<TrialRecord> records(n_trials);

    auto run_range = [&](int begin, int end) {
        for (int i = begin; i < end; ++i) {
            const std::uint64_t trial_seed = substream_seed(root_seed, i);
            Rng target_rng(substream_seed(trial_seed, 0));
            const Location theta = sample_target(scenario, target_rng);
            ObservationVector obs =
                simulate_observation(theta, scenario.anchors, scenario.channel,
                                     scenario.timing, substream_seed(trial_seed, 1));
            if (attacked)
                obs = inject_attack(obs, scenario.attack, substream_seed(trial_seed, 2));

            const DetectionPair pair = detect_both(obs, 0.0, engine);
            TrialRecord& rec = records[i];
            rec.trial_id = i;
            rec.seed = trial_seed;
            rec.true_location = theta;
            rec.attacked = attacked;
            rec.log_lambda_elsa = pair.elsa.log_lambda;
            if (pair.conventional)
                rec.log_lambda_conventional = pair.conventional->log_lambda;
            rec.n_audible = obs.audible_count();
            rec.audible_mask.resize(obs.size());
            for (std::size_t a = 0; a < obs.size(); ++a)
                rec.audible_mask[a] = obs.obs[a].audible;
            rec.elsa_map_h1 = pair.elsa.map_h1.location;
        }
    };

    int threads = n_threads > 0 ? n_threads
                                : static_cast<int>(std::thread::hardware_concurrency());
    if (threads < 1) threads = 1;
    threads = std::min(threads, n_trials);
    if (threads == 1) {
        run_range(0, n_trials);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        const int chunk = (n_trials + threads - 1) / threads;
        for (int k = 0; k < threads; ++k) {
            const int begin = k * chunk;
            const int end = std::min(n_trials, begin + chunk);
            if (begin >= end) break;
            pool.emplace_back(run_range, begin, end);
        }
        for (auto& th : pool) th.join();
    }
    return records;
}

std::vector<double> extract_log_lambdas(const std::vector<TrialRecord>& records,
                                        DetectorTag tag, bool missing_as_never_detect,
                                        int* n_dropped) {
    std::vector<double> out;
    out.reserve(records.size());
    int dropped = 0;
    for (const auto& r : records) {
        if (tag == DetectorTag::kElsa) {
            out.push_back(r.log_lambda_elsa);
        } else if (r.log_lambda_conventional) {
            out.push_back(*r.log_lambda_conventional);
        } else if (missing_as_never_detect) {
            out.push_back(kNegInf);
        } else {
            ++dropped;
        }
    }
    if (n_dropped) *n_dropped = dropped;
    return out;
}

RocCurve build_roc_from_values(std::vector<double> honest, std::vector<double> attacked,
                               std::string detector_tag, int dropped_honest,
                               int dropped_attacked) {
    if (honest.empty() || attacked.empty())
        throw std::invalid_argument("build_roc: empty sample list");
    std::sort(honest.begin(), honest.end());
    std::sort(attacked.begin(), attacked.end());

    std::vector<double> candidates;
    candidates.reserve(honest.size() + attacked.size());
    candidates.insert(candidates.end(), honest.begin(), honest.end());
    candidates.insert(candidates.end(), attacked.begin(), attacked.end());
    std::sort(candidates.begin(), candidates.end(), std::greater<>());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    const double nh = static_cast<double>(honest.size());
    const double na = static_cast<double>(attacked.size());
    auto frac_above = [](const std::vector<double>& sorted_asc, double eta) {
        return static_cast<double>(sorted_asc.end() -
                                   std::upper_bound(sorted_asc.begin(), sorted_asc.end(), eta));
    };

    RocCurve curve;
    curve.detector_tag = std::move(detector_tag);
    curve.dropped_honest = dropped_honest;
    curve.dropped_attacked = dropped_attacked;
    curve.points.push_back(RocPoint{0.0, 0.0, kPosInf});
    for (const double eta : candidates) {
        curve.points.push_back(RocPoint{frac_above(honest, eta) / nh,
                                        frac_above(attacked, eta) / na, eta});
    }
    curve.points.push_back(RocPoint{1.0, 1.0, kNegInf});
    return curve;
}

RocCurve build_roc(const std::vector<TrialRecord>& honest,
                   const std::vector<TrialRecord>& attacked, DetectorTag tag) {
    int dropped_h = 0, dropped_a = 0;
    std::vector<double> hv = extract_log_lambdas(honest, tag, false, &dropped_h);
    std::vector<double> av = extract_log_lambdas(attacked, tag, false, &dropped_a);
    return build_roc_from_values(std::move(hv), std::move(av),
                                 tag == DetectorTag::kElsa ? "elsa" : "conventional",
                                 dropped_h, dropped_a);
}

double auc(const RocCurve& curve) {
    double area = 0.0;
    for (std::size_t k = 1; k < curve.points.size(); ++k) {
        const RocPoint& a = curve.points[k - 1];
        const RocPoint& b = curve.points[k];
        area += (b.false_alarm_rate - a.false_alarm_rate) *
                0.5 * (a.detection_rate + b.detection_rate);
    }
    return area;
}

OperatingPoint pd_at_pf(const std::vector<double>& honest,
                        const std::vector<double>& attacked, double pf_target) {
    if (honest.empty() || attacked.empty())
        throw std::invalid_argument("pd_at_pf: empty sample list");
    if (pf_target < 0.0 || pf_target > 1.0)
        throw std::invalid_argument("pd_at_pf: pf_target outside [0,1]");

    std::vector<double> desc = honest;
    std::sort(desc.begin(), desc.end(), std::greater<>());
    const std::size_t k = static_cast<std::size_t>(std::floor(pf_target * desc.size()));
    const double eta = k < desc.size() ? desc[k] : kNegInf;

    auto frac_above = [eta](const std::vector<double>& v) {
        std::size_t n = 0;
        for (double x : v) n += x > eta ? 1 : 0;
        return static_cast<double>(n) / static_cast<double>(v.size());
    };
    return OperatingPoint{frac_above(attacked), frac_above(desc), eta};
}

XiReport xi_term(const Location& theta_hat, const std::vector<Location>& anchors,
                 const std::vector<bool>& audible, const ChannelParams& ch,
                 const TimingParams& tm, const AttackParams& atk, double shift_sign) {
    if (anchors.size() != audible.size())
        throw std::invalid_argument("xi_term: anchors/audible length mismatch");
    const double shift = shift_sign * equivalent_distance_m(atk, tm);

    XiReport rep;
    rep.shifted_distances_m.reserve(anchors.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < anchors.size(); ++i) {
        const double d = distance(theta_hat, anchors[i]);
        double ds;
        double term;
        if (audible[i]) {
            ++rep.n_audible;
            ds = std::max(d + shift, kDistanceFloorM);
            term = log_norm_cdf(-audibility_argument(ds, ch)) -
                   log_norm_cdf(-audibility_argument(d, ch));
        } else {
            ds = std::max(d - shift, kDistanceFloorM);
            term = log_norm_cdf(audibility_argument(ds, ch)) -
                   log_norm_cdf(audibility_argument(d, ch));
        }
        rep.shifted_distances_m.push_back(ds);
        sum += term;
    }
    const double var0 = tm.sigma_w_s * tm.sigma_w_s;
    const double var1 = var0 + atk.sigma_delta_s * atk.sigma_delta_s;
    rep.xi = 2.0 * var0 * var1 * sum;
    rep.certificate = rep.xi <= kXiCertificateTolerance;
    return rep;
}

XiCertification certify_xi(const XiCertifyOptions& opt) {
    if (opt.n_samples < 1) throw std::invalid_argument("certify_xi: n_samples < 1");
    if (opt.n_anchors_min < 1 || opt.n_anchors_max < opt.n_anchors_min)
        throw std::invalid_argument("certify_xi: bad anchor count range");
    if (!(opt.parameter_factor >= 1.0))
        throw std::invalid_argument("certify_xi: parameter_factor must be >= 1");
    opt.region.validate();

    // Reference values the sampling neighborhood is centered on.
    const ChannelParams ref_ch{-40.0, 3.2, 1.0, std::sqrt(10.0), -102.0};
    const TimingParams ref_tm{3.0e8, 1e-8};
    const double ref_mu = 4e-8;
    const double ref_sigma_delta = 4e-8;

    XiCertification cert;
    cert.samples.reserve(opt.n_samples);
    for (int s = 0; s < opt.n_samples; ++s) {
        Rng rng(substream_seed(opt.root_seed, s));
        auto around = [&](double v) {
            // log-uniform in [v/factor, v*factor], magnitude-wise
            const double lo = std::log(std::fabs(v) / opt.parameter_factor);
            const double hi = std::log(std::fabs(v) * opt.parameter_factor);
            const double mag = std::exp(rng.uniform(lo, hi));
            return v < 0.0 ? -mag : mag;
        };

        XiSample sample;
        sample.sample_id = s;
        sample.channel = ChannelParams{around(ref_ch.p_t_dbm), around(ref_ch.alpha),
                                       around(ref_ch.d_0_m), around(ref_ch.sigma_eps_dbm),
                                       around(ref_ch.lambda_dbm)};
        sample.timing = TimingParams{ref_tm.v_p_mps, around(ref_tm.sigma_w_s)};
        const double mu = opt.fixed_mu_delta_s ? *opt.fixed_mu_delta_s : around(ref_mu);
        sample.attack = AttackParams{mu, around(ref_sigma_delta), true};

        const int n = opt.n_anchors_min +
                      static_cast<int>(rng.next_u64() %
                                       (opt.n_anchors_max - opt.n_anchors_min + 1));
        sample.theta_hat = Location{rng.uniform(opt.region.x_min, opt.region.x_max),
                                    rng.uniform(opt.region.y_min, opt.region.y_max)};
        sample.anchors.reserve(n);
        for (int a = 0; a < n; ++a)
            sample.anchors.push_back(
                Location{rng.uniform(opt.region.x_min, opt.region.x_max),
                         rng.uniform(opt.region.y_min, opt.region.y_max)});

        // Audible count uniform over 0..n covers every pattern composition.
        const int l = static_cast<int>(rng.next_u64() % (n + 1));
        std::vector<int> order(n);
        for (int a = 0; a < n; ++a) order[a] = a;
        for (int a = n - 1; a > 0; --a)
            std::swap(order[a], order[rng.next_u64() % (a + 1)]);
        sample.audible.assign(n, false);
        for (int a = 0; a < l; ++a) sample.audible[order[a]] = true;

        sample.report = xi_term(sample.theta_hat, sample.anchors, sample.audible,
                                sample.channel, sample.timing, sample.attack,
                                opt.shift_sign);
        if (!sample.report.certificate) ++cert.n_failed;
        cert.samples.push_back(std::move(sample));
    }
    cert.all_certified = cert.n_failed == 0;
    return cert;
}

double z_statistic(const ObservationVector& obs, const Location& theta,
                   const TimingParams& tm, const AttackParams& atk) {
    const double sw2 = tm.sigma_w_s * tm.sigma_w_s;
    const double sd2 = atk.sigma_delta_s * atk.sigma_delta_s;
    double z = 0.0;
    for (std::size_t i = 0; i < obs.size(); ++i) {
        if (!obs.obs[i].audible) continue;
        const double t = *obs.obs[i].delay_s;
        const double psi = distance(theta, obs.anchors[i]) / tm.v_p_mps;
        z += sd2 * t * t + 2.0 * atk.mu_delta_s * sw2 * t - 2.0 * sd2 * psi * t;
    }
    return z;
}

double z_gamma_threshold(const ObservationVector& obs, const Location& theta,
                         double log_eta, const TimingParams& tm,
                         const AttackParams& atk) {
    const double sw2 = tm.sigma_w_s * tm.sigma_w_s;
    const double sd2 = atk.sigma_delta_s * atk.sigma_delta_s;
    const double s2 = sw2 + sd2;
    const double mu = atk.mu_delta_s;
    double gamma = 0.0;
    int l = 0;
    for (std::size_t i = 0; i < obs.size(); ++i) {
        if (!obs.obs[i].audible) continue;
        ++l;
        const double psi = distance(theta, obs.anchors[i]) / tm.v_p_mps;
        gamma += 2.0 * psi * mu * sw2 + mu * mu * sw2 - sd2 * psi * psi;
    }
    gamma += 2.0 * sw2 * s2 * (log_eta + l * 0.5 * std::log(s2 / sw2));
    return gamma;
}

double fixed_theta_log_ratio(const ObservationVector& obs, const Location& theta,
                             const ChannelParams& ch, const TimingParams& tm,
                             const AttackParams& atk, bool with_audibility) {
    double sum = 0.0;
    for (std::size_t i = 0; i < obs.size(); ++i) {
        const double d = distance(theta, obs.anchors[i]);
        if (obs.obs[i].audible) {
            const double t = *obs.obs[i].delay_s;
            sum += log_likelihood_delay(t, d, Hypothesis::kSpoofing, tm, atk) -
                   log_likelihood_delay(t, d, Hypothesis::kNoSpoofing, tm, atk);
        }
        if (with_audibility) {
            sum += log_audibility_term(obs.obs[i].audible, d, Hypothesis::kSpoofing, ch,
                                       atk, tm) -
                   log_audibility_term(obs.obs[i].audible, d, Hypothesis::kNoSpoofing, ch,
                                       atk, tm);
        }
    }
    return sum;
}

}  // namespace elsa
