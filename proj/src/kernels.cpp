#include "tpbessel/kernels.hpp"

namespace tpbessel {

void trapezoid_kernel_scalar(const KernelInput& in, cdouble z, KernelOutput& out)
{
  const double zr = z.real(), zi = z.imag();
  double s0r[4] = {}, s0i[4] = {}, s1r[2] = {}, s1i[2] = {};
  double k0r = 0, k0i = 0, k1r = 0, k1i = 0;
  for (int k = 0; k < in.n; ++k) {
    double dr = in.tre[k] - zr, di = in.tim[k] - zi;
    double den = dr * dr + di * di;
    double ir = dr / den, ii = -di / den;
    double gr = in.wre[k] * ir - in.wim[k] * ii;
    double gi = in.wre[k] * ii + in.wim[k] * ir;
    double hr = gr * ir - gi * ii;
    double hi = gr * ii + gi * ir;
    k0r += gr;
    k0i += gi;
    k1r += hr;
    k1i += hi;
    for (int j = 0; j < 4; ++j) {
      double fr = in.fre[j][k], fi = in.fim[j][k];
      s0r[j] += fr * gr - fi * gi;
      s0i[j] += fr * gi + fi * gr;
      if (j < 2) {
        s1r[j] += fr * hr - fi * hi;
        s1i[j] += fr * hi + fi * hr;
      }
    }
  }
  const double inv_n = 1.0 / in.n;
  for (int j = 0; j < 4; ++j) out.s0[j] = cdouble(s0r[j], s0i[j]) * inv_n;
  for (int j = 0; j < 2; ++j) out.s1[j] = cdouble(s1r[j], s1i[j]) * inv_n;
  out.k0 = cdouble(k0r, k0i) * inv_n;
  out.k1 = cdouble(k1r, k1i) * inv_n;
}

#if defined(TPB_HAVE_AVX2)
bool kernel_available(KernelKind k)
{
  if (k != KernelKind::avx2) return true;
  static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return ok;
}
#else
bool kernel_available(KernelKind k) { return k != KernelKind::avx2; }
void trapezoid_kernel_avx2(const KernelInput& in, cdouble z, KernelOutput& out)
{
  trapezoid_kernel_scalar(in, z, out);
}
#endif

KernelKind kernel_selected()
{
  return kernel_available(KernelKind::avx2) ? KernelKind::avx2 : KernelKind::scalar;
}

void trapezoid_kernel(const KernelInput& in, cdouble z, KernelOutput& out, KernelKind kind)
{
  if (kind == KernelKind::automatic) kind = kernel_selected();
  if (kind == KernelKind::avx2 && kernel_available(KernelKind::avx2))
    trapezoid_kernel_avx2(in, z, out);
  else
    trapezoid_kernel_scalar(in, z, out);
}

const char* kernel_name(KernelKind k)
{
  switch (k) {
    case KernelKind::automatic: return "automatic";
    case KernelKind::scalar: return "scalar";
    case KernelKind::avx2: return "avx2";
  }
  return "?";
}

}  // namespace tpbessel
