"""Maximum-entropy rank distributions from length laws.

Maximizing rank entropy under a mean-length constraint yields
p_i = exp(-alpha l_i) / Z.  The length law decides the family: a linear
law gives the geometric distribution, a logarithmic law gives the zeta
power law, and a shifted power law (Zipf-Mandelbrot) smooths the exact
step behaviour.  Sampling and maximum-likelihood fitting round-trip.
"""

import math

import optcoding as oc

alpha = 1.2

linear = oc.MaxentSpec(alpha, oc.LinearLength())
q = 1 - math.exp(-alpha)
print(f"linear length law, alpha = {alpha}: geometric with q = {q:.4f}")
for i in (1, 2, 3):
    print(f"   p_{i}: maxent {oc.maxent_pmf(linear, i):.6f}"
          f"   geometric {oc.geometric_pmf(oc.GeometricParams(q), i):.6f}")

log_spec = oc.MaxentSpec(2.0, oc.LogLength())
print("\nnatural-log length law, alpha = 2: zeta distribution")
print(f"   p_1: maxent {oc.maxent_pmf(log_spec, 1):.6f}"
      f"   zeta {oc.zeta_pmf(oc.ZetaParams(2.0), 1):.6f}   6/pi^2 = {6 / math.pi ** 2:.6f}")

print("\nnormalizers: zeta(2) =", round(oc.riemann_zeta(2.0), 10),
      "  hurwitz zeta(2, 1/2) =", round(oc.hurwitz_zeta(2.0, 0.5), 10),
      "(= pi^2/2)")

zm = oc.ZipfMandelbrotParams(2.0, 0.5)
print("shifted power law (alpha = 2, b = 1/2), first values:",
      [round(oc.zipf_mandelbrot_pmf(zm, i), 5) for i in range(4)])

h = oc.entropy(lambda i: oc.geometric_pmf(oc.GeometricParams(0.5), i),
               truncation=60, unit="bits")
print("\nentropy of geometric(1/2):", round(h.value, 6), h.unit, "(= 2 bits)")

print("\nsample-then-fit round trips (n = 50000):")
for family, params in [("zeta", oc.ZetaParams(2.0)),
                       ("geometric", oc.GeometricParams(0.3)),
                       ("zipf-mandelbrot", oc.ZipfMandelbrotParams(2.0, 2.0))]:
    ranks = oc.sample(params, 17, 50_000)
    fit = oc.fit_mle(ranks, family)
    rounded = {k: round(v, 4) for k, v in fit.params.items()}
    print(f"   {family:<16} true {params} -> fitted {rounded}"
          f"   loglik {fit.log_likelihood:.1f}")
