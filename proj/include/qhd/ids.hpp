#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <ostream>

namespace qhd {

/// Opaque integer identifier, distinct per tag so curve and point ids do not mix.
template <typename Tag>
struct Id {
    int value = -1;

    constexpr Id() = default;
    constexpr explicit Id(int v) : value(v) {}

    friend constexpr auto operator<=>(Id, Id) = default;

    friend std::ostream & operator<<(std::ostream & os, Id id) { return os << id.value; }
};

using CurveId = Id<struct CurveTag>;
using PointId = Id<struct PointTag>;

} // namespace qhd

template <typename Tag>
struct std::hash<qhd::Id<Tag>> {
    auto operator()(qhd::Id<Tag> id) const noexcept -> std::size_t { return std::hash<int>{}(id.value); }
};
