#pragma once

namespace posmech {

// Worker count for OpenMP kernels; 0 means the OpenMP default.
void set_num_threads(int n);
int num_threads();
int resolve_threads();  // actual count a parallel region will use

}  // namespace posmech
