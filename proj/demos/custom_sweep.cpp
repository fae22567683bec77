// Prints error, envelopes and local rate for both models on a doubling grid.

#include <cmath>
#include <cstdio>

#include "dimtrunc/dimtrunc.hpp"

int main() {
  using namespace dimtrunc;
  const DecayProfile profile = DecayProfile::constant(1.0, 2.0, 0.6);
  const SourceTerm source = SourceTerm::poly({1.0, -1.0, 3.0});
  const Model1Problem m1(profile, source);
  const Model2Problem m2(profile, poisson_1d(source));

  TruncationGrid grid;
  for (std::uint64_t s = 1; s <= 4096; s *= 4) grid.push_back(s);

  const ErrorCurve c1 = error_curve(m1, grid);
  const ErrorCurve c2 = error_curve(m2, grid);
  const BoundsReport r1 = certify_sandwich(c1, lower_envelope(m1, grid), upper_envelope(m1, grid));
  const BoundsReport r2 = certify_sandwich(c2, lower_envelope2(m2, grid), upper_envelope2(m2, 0.6, grid));

  std::printf("%6s  %-12s %-12s %-12s  %-12s %-12s %-12s\n", "s", "m1 lower", "m1 error", "m1 upper", "m2 lower",
              "m2 error", "m2 upper");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const BoundsRow& a = r1.rows[i];
    const BoundsRow& b = r2.rows[i];
    std::printf("%6llu  %-12.4e %-12.4e %-12.4e  %-12.4e %-12.4e %-12.4e\n",
                static_cast<unsigned long long>(grid[i]), a.lower, a.error, a.upper, b.lower, b.error, b.upper);
  }
  std::printf("sandwich: model1 %s, model2 %s\n", r1.pass() ? "pass" : "fail", r2.pass() ? "pass" : "fail");
  if (r2.fit) std::printf("model2 slope over s >= %llu: %.4f (expected %.1f)\n",
                          static_cast<unsigned long long>(r2.fit->s_min), r2.fit->slope, 1.0 - 2.0 * 2.0);
  return r1.pass() && r2.pass() ? 0 : 1;
}
