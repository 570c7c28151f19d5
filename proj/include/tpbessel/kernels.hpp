#pragma once

#include "tpbessel/numeric.hpp"

namespace tpbessel {

// Trapezoid sums of the discretized Cauchy integral over the contour nodes
//   s0[j] = (1/n) sum f_j w / (t - z),      j = 0..3
//   s1[j] = (1/n) sum f_j w / (t - z)^2,    j = 0..1
//   k0    = (1/n) sum w / (t - z),  k1 = (1/n) sum w / (t - z)^2
// with w = t - z_c. Arrays are structure-of-arrays doubles of length n.
struct KernelInput {
  int n = 0;
  const double* tre = nullptr;
  const double* tim = nullptr;
  const double* wre = nullptr;
  const double* wim = nullptr;
  const double* fre[4] = {};
  const double* fim[4] = {};
};

struct KernelOutput {
  cdouble s0[4];
  cdouble s1[2];
  cdouble k0, k1;
};

enum class KernelKind { automatic, scalar, avx2 };

void trapezoid_kernel_scalar(const KernelInput& in, cdouble z, KernelOutput& out);
// Defined only when built with AVX2 support; check kernel_available first.
void trapezoid_kernel_avx2(const KernelInput& in, cdouble z, KernelOutput& out);

bool kernel_available(KernelKind k);

// Runs the requested variant; automatic picks AVX2 when the CPU has it.
void trapezoid_kernel(const KernelInput& in, cdouble z, KernelOutput& out,
                      KernelKind kind = KernelKind::automatic);

const char* kernel_name(KernelKind k);
// Variant chosen by automatic on this machine.
KernelKind kernel_selected();

}  // namespace tpbessel
