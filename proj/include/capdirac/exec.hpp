#pragma once

namespace capdirac {

// Execution policy for the data-parallel kernels (operator assembly rows,
// Weyl anti-diagonals, trajectory batches, symbol-evolution grids).
// Parallel paths write into disjoint preallocated slots only, so serial and
// parallel results are bitwise identical; tests assert that.
enum class Exec { serial, parallel };

// Effective thread count for Exec::parallel (1 for Exec::serial).
int exec_threads(Exec ex);

// Process-wide default used by the CLI: CAPDIRAC_THREADS env var or
// --threads flag, capped to the OpenMP maximum.
void set_default_threads(int n);
int default_threads();

}  // namespace capdirac
