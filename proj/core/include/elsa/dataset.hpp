#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "elsa/adversary.hpp"
#include "elsa/model.hpp"

namespace elsa {

/// Pairwise ranging measurements between testbed nodes. Row index is
/// the TWR initiator, column index the responder: toa(i, j) is the
/// delay node i measured when ranging node j, rss(i, j) the response
/// power node i observed. Entries may be missing; the diagonal is
/// always absent.
struct MeasurementSet {
    std::vector<int> node_ids;  // file order; lookups go through index_of
    std::vector<Location> node_positions;
    std::vector<std::optional<double>> toa_s;    // flattened n*n, row-major
    std::vector<std::optional<double>> rss_dbm;  // same shape

    std::size_t size() const { return node_ids.size(); }
    int index_of(int node_id) const;  // -1 when unknown

    const std::optional<double>& toa(std::size_t tx, std::size_t rx) const {
        return toa_s[tx * size() + rx];
    }
    const std::optional<double>& rss(std::size_t tx, std::size_t rx) const {
        return rss_dbm[tx * size() + rx];
    }
    void set(std::size_t tx, std::size_t rx, std::optional<double> toa,
             std::optional<double> rss) {
        toa_s[tx * size() + rx] = toa;
        rss_dbm[tx * size() + rx] = rss;
    }
    void resize(std::size_t n) {
        node_ids.resize(n);
        node_positions.resize(n);
        toa_s.assign(n * n, std::nullopt);
        rss_dbm.assign(n * n, std::nullopt);
    }
};

class DatasetParseError : public std::runtime_error {
public:
    enum class Kind {
        kIo,
        kHeader,
        kFieldCount,
        kNonNumeric,
        kDuplicateNode,
        kUnknownNode,
        kDuplicateEntry,
        kDimensionMismatch,
    };
    DatasetParseError(Kind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

/// Thrown when a scenario's target has no measurement from any anchor.
class EmptyObservationError : public std::runtime_error {
public:
    explicit EmptyObservationError(int target_id)
        : std::runtime_error("no anchor measured target node " +
                             std::to_string(target_id)) {}
};

/// Anchor subset and audibility threshold applied to a measurement set.
struct DatasetScenario {
    std::vector<int> anchor_ids;
    int target_id = 0;
    double lambda_override_dbm = 0.0;

    void validate() const;
};

/// Canonical on-disk format: a positions CSV (node_id,x_m,y_m) and a
/// measurements CSV (tx_id,rx_id,toa_s,rss_dbm), empty fields meaning
/// missing. UTF-8, '.' decimal separator, scientific notation accepted.
MeasurementSet load_measurements(const std::string& positions_csv,
                                 const std::string& measurements_csv);

/// Writes the canonical CSVs with full double precision; present
/// entries round-trip bit-exactly through load_measurements.
void save_measurements(const MeasurementSet& ms, const std::string& positions_csv,
                       const std::string& measurements_csv);

/// Convert square-matrix exports into a MeasurementSet: a positions CSV
/// plus one headerless n-by-n CSV grid per quantity, rows in positions
/// order, empty cells meaning missing.
MeasurementSet from_matrix_files(const std::string& positions_csv,
                                 const std::string& toa_matrix_csv,
                                 const std::string& rss_matrix_csv);

/// Slice one target's row out of the measurement set. An anchor is
/// audible iff its RSS entry is present and >= lambda_override; its
/// delay is then taken from the TOA entry.
ObservationVector to_observation(const MeasurementSet& ms, const DatasetScenario& sc);

/// Delay injection on a dataset-derived observation vector.
ObservationVector attack_dataset_observation(const ObservationVector& obs,
                                             const AttackParams& atk,
                                             std::uint64_t rng_seed);

/// Layout of the synthetic office testbed used when the real archive is
/// not available. The three corner ids sit at (0,0), (w,0) and (0,h);
/// the rest fill a jittered lattice.
struct TestbedSpec {
    int n_nodes = 44;
    double width_m = 8.0;
    double height_m = 7.0;
    std::array<int, 3> corner_ids{10, 35, 44};
};

/// Generate a complete pairwise measurement set (every off-diagonal
/// entry present) from the forward channel model.
MeasurementSet make_synthetic_testbed(const TestbedSpec& spec, const ChannelParams& ch,
                                      const TimingParams& tm, std::uint64_t rng_seed);

}  // namespace elsa
