#pragma once

#include <qhd/curve_config.hpp>
#include <qhd/exact.hpp>

#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace qhd {

struct BlowDownStep {
    CurveId contracted;
    IncidencePoint new_point;
    /// C.f for every curve C that met the contracted curve.
    std::map<CurveId, int> multiplicities;
};

/// Contracts the -1 curve f. The new point remembers f and its points so blow_up can undo it.
/// Throws std::invalid_argument when f is absent or not a -1 curve, and
/// UnsupportedContractionError when f is singular or passes through a singular branch.
auto contract(const CurveConfig & config, CurveId f) -> std::pair<CurveConfig, BlowDownStep>;

/// Blows up a point. Points created by contract are restored exactly; any other point gets the
/// smooth-branch rule (every branch meets the new curve once, tangency orders drop by one).
auto blow_up(const CurveConfig & config, PointId point, std::optional<std::string> label = std::nullopt) -> CurveConfig;

/// Blows up a general point of a curve, away from every other curve.
auto blow_up_on_curve(const CurveConfig & config, CurveId curve, std::optional<std::string> label = std::nullopt) -> CurveConfig;

using BlowUpSite = std::variant<PointId, CurveId>;

/// Blow up at `site`, then contract the listed curves in order.
auto elementary_modification(const CurveConfig & config, BlowUpSite site, const std::vector<CurveId> & contract_ids) -> CurveConfig;

/// A contraction keeps the configuration simple normal crossing: f is smooth, meets at most two
/// other curves, each once transversally at a point with no third branch, and those two do not
/// already meet. Anything else creates a singular point or tangency that no later contraction
/// of the driver can remove.
auto is_snc_contractible(const CurveConfig & config, CurveId f) -> bool;

struct ContractionPolicy {
    bool extras_first = true;
    /// Only contract curves accepted by is_snc_contractible. Without it the driver contracts any
    /// -1 curve and stops at the first refused contraction.
    bool snc_only = true;

    static auto standard() -> ContractionPolicy { return {}; }
    static auto unrestricted() -> ContractionPolicy { return {true, false}; }
};

struct BlowDownRecord {
    CurveConfig initial;
    std::vector<BlowDownStep> steps;
    CurveConfig final;
    /// Class of every initial curve in the basis (l, e_1, ..., e_B); e_j is the exceptional class
    /// of the blow-up undoing steps[j-1]. Empty unless the final curves are all lines.
    std::map<CurveId, IntVector> pic_basis;

    auto pic_tracked() const -> bool { return !pic_basis.empty() || initial.curve_count() == 0; }
};

struct PlaneModel {
    CurveConfig config;
    BlowDownRecord record;
};

struct BlowDownFailure {
    std::string reason;
    BlowDownRecord partial;
};

struct BlowDownResult {
    std::optional<PlaneModel> model;
    std::optional<BlowDownFailure> failure;

    auto ok() const -> bool { return model.has_value(); }
};

/// Contracts -1 curves chosen by `policy` until none is left. Stalling with more than four
/// curves is a failure.
auto full_blow_down(const CurveConfig & config, const std::set<CurveId> & extras = {}, ContractionPolicy policy = {}) -> BlowDownResult;

/// Explores every admissible contraction order (memoised on the set of contracted curves) and
/// reports whether any of them, and whether all maximal ones, end at four general lines.
struct OrderExploration {
    bool any_success = false;
    bool all_success = false;
    std::size_t terminal_states = 0;
};

auto explore_contraction_orders(const CurveConfig & config, ContractionPolicy policy = {}, std::size_t state_limit = 1'000'000) -> OrderExploration;

auto is_four_lines_general_position(const CurveConfig & config) -> bool;
auto is_four_lines_general_position(const PlaneModel & pm) -> bool;

/// 10 - (number of curves), valid when the curves rationally span Pic.
auto k_squared(const CurveConfig & config) -> long long;
/// 9 - B for a blow-down ending on the plane.
auto k_squared(const BlowDownRecord & record) -> long long;

/// l^2 = 1, e_i^2 = -1.
auto pic_pairing(const IntVector & a, const IntVector & b) -> long long;

/// Pic classes from the contraction log when the final curves are all lines; empty otherwise.
auto track_pic(const BlowDownRecord & record) -> std::map<CurveId, IntVector>;

/// Undoes the record step by step and checks that every blown-up point lies on two or more
/// branches or on a singular branch. Returns the offending step index, or nullopt.
auto first_nonsingular_blowup(const BlowDownRecord & record) -> std::optional<std::size_t>;

/// Replays the record backwards from the final configuration.
auto replay_blow_ups(const BlowDownRecord & record) -> CurveConfig;

} // namespace qhd
