#include "elsa/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "elsa/rng.hpp"

namespace elsa {

namespace {

using Kind = DatasetParseError::Kind;

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    std::stringstream ss(line);
    while (std::getline(ss, cur, ',')) out.push_back(trim(cur));
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

double parse_double(const std::string& s, const std::string& where) {
    std::size_t pos = 0;
    double v;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw DatasetParseError(Kind::kNonNumeric, where + ": non-numeric value '" + s + "'");
    }
    if (pos != s.size())
        throw DatasetParseError(Kind::kNonNumeric, where + ": non-numeric value '" + s + "'");
    return v;
}

int parse_int(const std::string& s, const std::string& where) {
    std::size_t pos = 0;
    int v;
    try {
        v = std::stoi(s, &pos);
    } catch (const std::exception&) {
        throw DatasetParseError(Kind::kNonNumeric, where + ": non-numeric id '" + s + "'");
    }
    if (pos != s.size())
        throw DatasetParseError(Kind::kNonNumeric, where + ": non-numeric id '" + s + "'");
    return v;
}

std::optional<double> parse_optional(const std::string& s, const std::string& where) {
    if (s.empty()) return std::nullopt;
    return parse_double(s, where);
}

std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::ifstream open_or_throw(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DatasetParseError(Kind::kIo, "cannot open " + path);
    return in;
}

void load_positions(const std::string& path, MeasurementSet& ms) {
    std::ifstream in = open_or_throw(path);
    std::string line;
    if (!std::getline(in, line) || trim(line) != "node_id,x_m,y_m")
        throw DatasetParseError(Kind::kHeader,
                                path + ": expected header 'node_id,x_m,y_m'");
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const std::string where = path + ":" + std::to_string(line_no);
        const auto f = split_csv(line);
        if (f.size() != 3)
            throw DatasetParseError(Kind::kFieldCount, where + ": expected 3 fields");
        const int id = parse_int(f[0], where);
        if (ms.index_of(id) >= 0)
            throw DatasetParseError(Kind::kDuplicateNode,
                                    where + ": duplicate node id " + std::to_string(id));
        ms.node_ids.push_back(id);
        ms.node_positions.push_back(
            Location{parse_double(f[1], where), parse_double(f[2], where)});
    }
    if (ms.node_ids.empty())
        throw DatasetParseError(Kind::kDimensionMismatch, path + ": no nodes");
}

}  // namespace

int MeasurementSet::index_of(int node_id) const {
    for (std::size_t i = 0; i < node_ids.size(); ++i)
        if (node_ids[i] == node_id) return static_cast<int>(i);
    return -1;
}

MeasurementSet load_measurements(const std::string& positions_csv,
                                 const std::string& measurements_csv) {
    MeasurementSet ms;
    load_positions(positions_csv, ms);
    const std::size_t n = ms.node_ids.size();
    ms.toa_s.assign(n * n, std::nullopt);
    ms.rss_dbm.assign(n * n, std::nullopt);

    std::ifstream in = open_or_throw(measurements_csv);
    std::string line;
    if (!std::getline(in, line) || trim(line) != "tx_id,rx_id,toa_s,rss_dbm")
        throw DatasetParseError(Kind::kHeader, measurements_csv +
                                                   ": expected header 'tx_id,rx_id,toa_s,rss_dbm'");
    std::vector<char> seen(n * n, 0);
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const std::string where = measurements_csv + ":" + std::to_string(line_no);
        const auto f = split_csv(line);
        if (f.size() != 4)
            throw DatasetParseError(Kind::kFieldCount, where + ": expected 4 fields");
        const int tx = ms.index_of(parse_int(f[0], where));
        const int rx = ms.index_of(parse_int(f[1], where));
        if (tx < 0 || rx < 0)
            throw DatasetParseError(Kind::kUnknownNode,
                                    where + ": measurement references unknown node");
        if (tx == rx) continue;  // diagonal ignored
        const std::size_t k = static_cast<std::size_t>(tx) * n + rx;
        if (seen[k])
            throw DatasetParseError(Kind::kDuplicateEntry,
                                    where + ": duplicate measurement for node pair");
        seen[k] = 1;
        ms.toa_s[k] = parse_optional(f[2], where);
        ms.rss_dbm[k] = parse_optional(f[3], where);
    }
    return ms;
}

void save_measurements(const MeasurementSet& ms, const std::string& positions_csv,
                       const std::string& measurements_csv) {
    {
        std::ofstream out(positions_csv);
        if (!out) throw DatasetParseError(Kind::kIo, "cannot write " + positions_csv);
        out << "node_id,x_m,y_m\n";
        for (std::size_t i = 0; i < ms.size(); ++i)
            out << ms.node_ids[i] << ',' << fmt_double(ms.node_positions[i].x) << ','
                << fmt_double(ms.node_positions[i].y) << '\n';
    }
    std::ofstream out(measurements_csv);
    if (!out) throw DatasetParseError(Kind::kIo, "cannot write " + measurements_csv);
    out << "tx_id,rx_id,toa_s,rss_dbm\n";
    const std::size_t n = ms.size();
    for (std::size_t tx = 0; tx < n; ++tx) {
        for (std::size_t rx = 0; rx < n; ++rx) {
            if (tx == rx) continue;
            const auto& t = ms.toa(tx, rx);
            const auto& p = ms.rss(tx, rx);
            if (!t && !p) continue;
            out << ms.node_ids[tx] << ',' << ms.node_ids[rx] << ','
                << (t ? fmt_double(*t) : "") << ',' << (p ? fmt_double(*p) : "") << '\n';
        }
    }
}

MeasurementSet from_matrix_files(const std::string& positions_csv,
                                 const std::string& toa_matrix_csv,
                                 const std::string& rss_matrix_csv) {
    MeasurementSet ms;
    load_positions(positions_csv, ms);
    const std::size_t n = ms.node_ids.size();
    ms.toa_s.assign(n * n, std::nullopt);
    ms.rss_dbm.assign(n * n, std::nullopt);

    auto load_matrix = [&](const std::string& path,
                           std::vector<std::optional<double>>& dest) {
        std::ifstream in = open_or_throw(path);
        std::string line;
        std::size_t row = 0;
        int line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (trim(line).empty()) continue;
            const std::string where = path + ":" + std::to_string(line_no);
            if (row >= n)
                throw DatasetParseError(Kind::kDimensionMismatch,
                                        path + ": more rows than nodes");
            const auto f = split_csv(line);
            if (f.size() != n)
                throw DatasetParseError(
                    Kind::kDimensionMismatch,
                    where + ": expected " + std::to_string(n) + " columns, got " +
                        std::to_string(f.size()));
            for (std::size_t col = 0; col < n; ++col) {
                if (row == col) continue;
                dest[row * n + col] = parse_optional(f[col], where);
            }
            ++row;
        }
        if (row != n)
            throw DatasetParseError(Kind::kDimensionMismatch,
                                    path + ": expected " + std::to_string(n) + " rows, got " +
                                        std::to_string(row));
    };
    load_matrix(toa_matrix_csv, ms.toa_s);
    load_matrix(rss_matrix_csv, ms.rss_dbm);
    return ms;
}

void DatasetScenario::validate() const {
    if (anchor_ids.empty()) throw std::invalid_argument("DatasetScenario: no anchors");
    for (std::size_t i = 0; i < anchor_ids.size(); ++i) {
        if (anchor_ids[i] == target_id)
            throw std::invalid_argument("DatasetScenario: target is an anchor");
        for (std::size_t j = i + 1; j < anchor_ids.size(); ++j)
            if (anchor_ids[i] == anchor_ids[j])
                throw std::invalid_argument("DatasetScenario: duplicate anchor id");
    }
}

ObservationVector to_observation(const MeasurementSet& ms, const DatasetScenario& sc) {
    sc.validate();
    const int target = ms.index_of(sc.target_id);
    if (target < 0)
        throw std::invalid_argument("to_observation: unknown target id " +
                                    std::to_string(sc.target_id));

    ObservationVector out;
    bool any_present = false;
    for (const int aid : sc.anchor_ids) {
        const int a = ms.index_of(aid);
        if (a < 0)
            throw std::invalid_argument("to_observation: unknown anchor id " +
                                        std::to_string(aid));
        out.anchors.push_back(ms.node_positions[a]);
        const auto& rss = ms.rss(a, target);
        if (rss) any_present = true;
        if (rss && *rss >= sc.lambda_override_dbm) {
            const auto& toa = ms.toa(a, target);
            if (!toa)
                throw std::invalid_argument(
                    "to_observation: audible anchor without a delay entry (anchor " +
                    std::to_string(aid) + ", target " + std::to_string(sc.target_id) + ")");
            out.obs.push_back(Observation::heard(*toa, *rss));
        } else {
            out.obs.push_back(Observation::silent());
        }
    }
    if (!any_present) throw EmptyObservationError(sc.target_id);
    out.validate();
    return out;
}

ObservationVector attack_dataset_observation(const ObservationVector& obs,
                                             const AttackParams& atk,
                                             std::uint64_t rng_seed) {
    return inject_attack(obs, atk, rng_seed);
}

MeasurementSet make_synthetic_testbed(const TestbedSpec& spec, const ChannelParams& ch,
                                      const TimingParams& tm, std::uint64_t rng_seed) {
    if (spec.n_nodes < 4)
        throw std::invalid_argument("make_synthetic_testbed: need at least 4 nodes");
    for (const int id : spec.corner_ids)
        if (id < 1 || id > spec.n_nodes)
            throw std::invalid_argument("make_synthetic_testbed: corner id out of range");
    ch.validate();
    tm.validate();

    const int n = spec.n_nodes;
    MeasurementSet ms;
    ms.resize(n);
    for (int i = 0; i < n; ++i) ms.node_ids[i] = i + 1;

    const Location corners[3] = {{0.0, 0.0}, {spec.width_m, 0.0}, {0.0, spec.height_m}};
    std::vector<bool> is_corner(n, false);
    for (int c = 0; c < 3; ++c) {
        const int idx = spec.corner_ids[c] - 1;
        ms.node_positions[idx] = corners[c];
        is_corner[idx] = true;
    }

    // Remaining nodes on a jittered lattice covering the floor plan.
    const int rest = n - 3;
    const int gx = static_cast<int>(
        std::ceil(std::sqrt(rest * spec.width_m / spec.height_m)));
    const int gy = (rest + gx - 1) / gx;
    const double cw = spec.width_m / gx;
    const double chh = spec.height_m / gy;
    Rng place_rng(substream_seed(rng_seed, 0x9c0ffeeULL));
    int cell = 0;
    for (int i = 0; i < n; ++i) {
        if (is_corner[i]) continue;
        const int cx = cell % gx;
        const int cy = cell / gx;
        ++cell;
        const double x = (cx + 0.5) * cw + place_rng.uniform(-0.3, 0.3) * cw;
        const double y = (cy + 0.5) * chh + place_rng.uniform(-0.3, 0.3) * chh;
        ms.node_positions[i] = Location{std::round(x * 1000.0) / 1000.0,
                                        std::round(y * 1000.0) / 1000.0};
    }

    for (int tx = 0; tx < n; ++tx) {
        for (int rx = 0; rx < n; ++rx) {
            if (tx == rx) continue;
            Rng rng(substream_seed(rng_seed, 1 + static_cast<std::uint64_t>(tx) * n + rx));
            const double d = distance(ms.node_positions[tx], ms.node_positions[rx]);
            const double toa = d / tm.v_p_mps + rng.gaussian(0.0, tm.sigma_w_s);
            const double rss = mean_rss(d, ch) + rng.gaussian(0.0, ch.sigma_eps_dbm);
            ms.set(tx, rx, toa, rss);
        }
    }
    return ms;
}

}  // namespace elsa
