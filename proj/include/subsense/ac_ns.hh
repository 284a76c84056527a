#pragma once

#include <subsense/core.hh>
#include <subsense/network.hh>
#include <subsense/trace.hh>

namespace subsense
{
    /// AC-3 over the edge set. Each removal is logged with the variable at
    /// which the value had no support. Stops at the first wipe-out and flags
    /// the report unsatisfiable.
    [[nodiscard]] auto establish_ac(const Instance & inst) -> Reduction;

    /// True when some current value has no support at some other variable.
    [[nodiscard]] auto has_ac_removal(const Instance & inst) -> bool;

    /// Neighbourhood substitution until convergence, driven by the shared
    /// NbBlocks/BlockVars table: d is NS by e exactly when BlockVars(k,d,e)
    /// is empty. Candidates are processed in ascending (variable, d, e) order,
    /// so among interchangeable values the lower ones go first.
    [[nodiscard]] auto ns_to_convergence(const Instance & inst, const EngineOptions & options = {}) -> Reduction;
}
