#pragma once

#include <subsense/core.hh>

#include <cstdint>
#include <set>
#include <vector>

namespace subsense::generators
{
    /// Boolean instance with x1=x2, x3=x4, x2 or x3, x1 or x4.
    [[nodiscard]] auto figure1a() -> Instance;
    /// Domains {0,1,2}: x1 != x2, x1 != x3, x2 >= x3.
    [[nodiscard]] auto figure1b() -> Instance;
    /// Domains {0,1,2,3}: x1 != x2, x1 != x3, x1 != x4, x2 <= x3, x2 >= x4, x4 <= x3.
    [[nodiscard]] auto figure1c() -> Instance;

    /// D(x1) = {1..d-1}, D(x2) = {0..d-1}, constraint (x1 = x2) or (x2 = 0). Needs d >= 2.
    [[nodiscard]] auto two_var_cns_vs_ns(int d) -> Instance;

    /// x1 picks a set, x2 an element of it; x2, x3, x4 form an equality
    /// triangle over the universe. Elements are renumbered 1..|U| in
    /// ascending order. Throws InstanceError unless the sets cover U.
    [[nodiscard]] auto set_cover_instance(const std::set<int> & universe, const std::vector<std::set<int>> & sets) -> Instance;

    /// Path x1 >= x2 >= ... >= x_len over {1,2,3}.
    [[nodiscard]] auto geq_chain(int len) -> Instance;

    /// geq_chain(len) with a pinning gadget attached at each end, standing in
    /// for the surrounding variables that keep the end domains intact.
    /// Variables 0..len-1 are the chain; the gadget variables follow.
    [[nodiscard]] auto anchored_geq_chain(int len) -> Instance;

    /// n variables over {0..d-1}; each pair is constrained with probability
    /// `density`, and each value pair of a constrained pair is allowed with
    /// probability `tightness`.
    [[nodiscard]] auto random_instance(int n, int d, double density, double tightness, std::uint64_t seed) -> Instance;
}
