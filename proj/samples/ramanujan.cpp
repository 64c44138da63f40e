// Solves q z S^2 - S + 1 at q = 2 and checks every solution against the operator.

#include <qdiff/format.hpp>
#include <qdiff/verify.hpp>

#include <cstdio>

int main() {
  using namespace qdiff;
  NumericContext<double> ctx(std::complex<double>(2.0), 1e-10, 20);
  auto op = parse_operator<double>("q*z*S^2 - S + 1", ctx);
  std::printf("operator: %s\n", to_string(op).c_str());
  std::printf("%s", polygon_ascii(newton_polygon(op)).c_str());

  auto basis = solve(op, 20);
  bool ok = basis.complete();
  for (const auto& sol : basis.solutions) {
    auto r = apply_operator(op, sol);
    std::printf("%s\n  residual/scale = %.3g\n", solution_text(sol, ctx).c_str(), r.relative());
    ok = ok && r.relative() < 1e-8;
  }
  return ok ? 0 : 1;
}
