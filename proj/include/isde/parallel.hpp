#pragma once

namespace isde {

//! Worker pool size: ISDE_THREADS if set to a positive integer, otherwise
//! the OpenMP default.
int worker_count();

} // namespace isde
