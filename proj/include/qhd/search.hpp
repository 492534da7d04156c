#pragma once

#include <qhd/birational.hpp>
#include <qhd/curve_config.hpp>
#include <qhd/discriminant.hpp>
#include <qhd/lattice.hpp>

#include <optional>
#include <string>
#include <vector>

namespace qhd {

/// Rational class of a -1 curve meeting each attached curve once transversally.
struct CandidateClass {
    std::vector<CurveId> attachments; ///< sorted
    RationalVector rational_class;    ///< indexed like the lattice of Gamma
    Rational self_pairing;
};

struct Placement {
    std::vector<CandidateClass> candidates;
    std::optional<BlowDownRecord> verified;
    std::string rejection;
};

/// Attachment sets of size 2 or 3 with sum(-k_j) = 1 and self-pairing -1, sorted by attachments.
auto candidate_classes(const CurveConfig & gamma) -> std::vector<CandidateClass>;

/// Candidate class for a given attachment set, whether or not it passes the arithmetic filter.
auto candidate_for(const CurveConfig & gamma, std::vector<CurveId> attachments) -> CandidateClass;

/// 4 + (9 - K^2) - |Gamma|.
auto expected_extras(const CurveConfig & gamma) -> long long;

/// m-element sets of pairwise orthogonal candidates, lexicographic in candidate order.
auto enumerate_placements(const CurveConfig & gamma, const std::vector<CandidateClass> & candidates, std::size_t m,
                          std::size_t limit = 10'000'000) -> std::vector<Placement>;

/// Gamma plus one -1 curve per candidate, labelled X1, X2, ..., each meeting its attachments
/// transversally at fresh points. Returns the ids of the new curves through `extras`.
auto materialize(const CurveConfig & gamma, const Placement & placement, std::vector<CurveId> * extras = nullptr) -> CurveConfig;

/// Accepts iff the blow-down ends at four lines in general position.
auto verify_placement(const CurveConfig & gamma, Placement placement, ContractionPolicy policy = {}) -> Placement;

/// N . c >= 0.
auto nef_filter(const IntersectionLattice & lattice, const RationalVector & n, const CandidateClass & candidate) -> bool;

/// Effective divisors E0 and b E0 + A (A next to the centre, A^2 = -b) that meet every curve of
/// Gamma non-negatively; used as nef certificates.
auto default_nef_certificates(const CurveConfig & gamma) -> std::vector<RationalVector>;

struct SearchOptions {
    bool nef_filter = false;
    Execution exec = Execution::Serial;
    std::optional<std::size_t> extras; ///< defaults to expected_extras
    ContractionPolicy policy;
    std::size_t subgroup_limit = qhd::subgroup_limit();
};

struct ClassificationResult {
    FamilyParams params;
    std::vector<Placement> placements; ///< verified only
    /// Distinct surfaces: placements with the same model subgroup have the same Picard lattice
    /// and are counted once.
    std::size_t count = 0;
    std::vector<Subgroup> subgroups; ///< one per distinct surface, sorted
    std::vector<Subgroup> placement_subgroups; ///< parallel to placements
    FiniteAbelianGroup group;
    std::size_t candidate_count = 0;
    std::size_t tried = 0;
};

/// Verified placements of Gamma with their model subgroups.
auto search_placements(const CurveConfig & gamma, const SearchOptions & opts = {}) -> ClassificationResult;

auto classify(const FamilyParams & params, const SearchOptions & opts = {}) -> ClassificationResult;

/// 2 for W(p,p,p), N(q+2,q,0) and M(r+1,q,r); 1 otherwise.
auto expected_count(const FamilyParams & params) -> std::size_t;

auto sweep(Family family, int p_max, int q_max, int r_max, const SearchOptions & opts = {}) -> std::vector<ClassificationResult>;

} // namespace qhd
