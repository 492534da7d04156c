#pragma once

#include <qhd/exact.hpp>
#include <qhd/ids.hpp>

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace qhd {

enum class SingularityKind {
    NodeLike, ///< the curve met the contracted curve at two or more distinct points
    CuspLike  ///< the curve met the contracted curve tangentially at a single point
};

/// Marks a point where an image curve stopped being smooth.
struct Singularity {
    PointId point;
    SingularityKind kind = SingularityKind::NodeLike;
    int multiplicity = 2;

    friend auto operator==(const Singularity &, const Singularity &) -> bool = default;
};

/// Smooth rational curve; the genus is always zero so it is not stored.
struct Curve {
    CurveId id;
    int self_int = 0;
    std::optional<std::string> label;
    std::vector<Singularity> singularities;

    friend auto operator==(const Curve &, const Curve &) -> bool = default;
};

struct ExceptionalRecord;

/// A point of the surface lying on two or more curves of the configuration.
struct IncidencePoint {
    PointId id;
    std::vector<CurveId> incident;
    /// Local intersection multiplicity of two branches through this point. Stored as given;
    /// a symmetric configuration holds each unordered pair once.
    std::map<std::pair<CurveId, CurveId>, int> local_mults;
    /// Set when the point is the image of a contracted curve; lets blow-up restore it exactly.
    std::shared_ptr<const ExceptionalRecord> exceptional;

    auto contains(CurveId c) const -> bool;
    /// Looks up either orientation; a missing entry defaults to 1 (transversal).
    auto multiplicity(CurveId a, CurveId b) const -> int;
    void set_multiplicity(CurveId a, CurveId b, int m);

    /// Compares the remembered contraction by value.
    friend auto operator==(const IncidencePoint & a, const IncidencePoint & b) -> bool;
};

/// What a contraction removed: the -1 curve and the points it carried.
struct ExceptionalRecord {
    Curve curve;
    std::vector<IncidencePoint> points;

    friend auto operator==(const ExceptionalRecord &, const ExceptionalRecord &) -> bool = default;
};

class CurveConfig {
public:
    auto add_curve(int self_int, std::optional<std::string> label = std::nullopt) -> CurveId;
    void insert_curve(Curve curve);
    /// Adds a point; pairs missing from `mults` are stored with multiplicity 1.
    auto add_point(std::vector<CurveId> incident, const std::vector<std::tuple<CurveId, CurveId, int>> & mults = {}) -> PointId;
    void insert_point(IncidencePoint point);
    /// Transversal intersection of two curves at a fresh point.
    auto connect(CurveId a, CurveId b) -> PointId;
    void remove_curve(CurveId id);
    void remove_point(PointId id);

    auto has_curve(CurveId id) const -> bool { return curves_.contains(id); }
    auto has_point(PointId id) const -> bool { return points_.contains(id); }
    auto curve(CurveId id) const -> const Curve &;
    auto curve(CurveId id) -> Curve &;
    auto point(PointId id) const -> const IncidencePoint &;
    auto point(PointId id) -> IncidencePoint &;

    auto curves() const -> const std::map<CurveId, Curve> & { return curves_; }
    auto points() const -> const std::map<PointId, IncidencePoint> & { return points_; }
    auto curve_count() const -> std::size_t { return curves_.size(); }
    auto curve_ids() const -> std::vector<CurveId>;

    auto next_curve_id() const -> CurveId;
    auto next_point_id() const -> PointId;

    auto find_label(const std::string & label) const -> std::optional<CurveId>;
    auto label_of(CurveId id) const -> std::string;
    /// Points through which the curve passes, in id order.
    auto points_on(CurveId id) const -> std::vector<PointId>;
    /// Curves sharing at least one point with `id`.
    auto neighbours(CurveId id) const -> std::vector<CurveId>;

    friend auto operator==(const CurveConfig &, const CurveConfig &) -> bool = default;

private:
    std::map<CurveId, Curve> curves_;
    std::map<PointId, IncidencePoint> points_;
};

enum class Family { W, N, M };

struct FamilyParams {
    Family family = Family::W;
    int p = 0;
    int q = 0;
    int r = 0;

    friend auto operator==(const FamilyParams &, const FamilyParams &) -> bool = default;
};

auto family_name(Family f) -> std::string;
auto parse_family(const std::string & name) -> Family;
auto to_string(const FamilyParams & params) -> std::string;

/// Hirzebruch-Jung expansion n/q = b1 - 1/(b2 - ...), every b_i >= 2.
auto cf_expand(long long n, long long q) -> std::vector<long long>;
/// Inverse of cf_expand; returns the reduced pair (n, q).
auto cf_evaluate(const std::vector<long long> & bs) -> std::pair<Integer, Integer>;

/// Dual graph of the family: a star with a central curve and three arms read outward.
/// Labels are "E0" for the centre and "<arm><k>" along each arm ("P1" is adjacent to the centre).
auto make_family(const FamilyParams & params) -> CurveConfig;

/// Arm labels of a family in diagram order, and the self-intersection of the centre.
auto family_arm_names(Family f) -> std::vector<std::string>;

/// C.D for C != D (sum of local multiplicities over shared points), C.C for C == D.
auto total_intersection(const CurveConfig & config, CurveId a, CurveId b) -> long long;

auto validate(const CurveConfig & config) -> std::vector<std::string>;

} // namespace qhd
