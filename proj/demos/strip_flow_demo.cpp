// Flows the strip field from its seeds for t in [-2, 2] and compares the image
// under u = x e^(iy) with the Moebius flow z/(1 - tz).
#include <cmath>
#include <cstdio>

#include "bkc/dynamics.hpp"

int main() {
  using namespace bkc;
  const ComplexVectorField W = strip_real_field();
  const PlanarMap u = strip_map();
  std::printf("W = (%s, %s) on %s\n\n", to_string(W.a).c_str(), to_string(W.b).c_str(), strip_domain().name().c_str());
  std::printf("%8s %6s %12s %12s %12s %10s\n", "x0", "y0", "t", "x(t)", "y(t)", "|u - mob|");
  for (const Point& p : strip_seeds()) {
    for (double t : {-2.0, 2.0}) {
      const FlowResult r = integrate_flow(W, p, t, 1e-3, strip_domain());
      if (!r.completed()) {
        std::printf("%8.3f %6.2f %12.3f  %s\n", p.x, p.y, t, r.message.c_str());
        continue;
      }
      const Point img = u(r.end);
      const Point ref = mobius_reference(u(p), t);
      std::printf("%8.3f %6.2f %12.3f %12.6f %12.6f %10.2e\n", p.x, p.y, t, r.end.x, r.end.y,
                  std::hypot(img.x - ref.x, img.y - ref.y));
    }
  }
  const FlowResult escape = integrate_flow(W, {0.5, 0.0}, 3.0, 1e-3, strip_domain());
  std::printf("\nfrom (0.5, 0): %s at t = %.3f\n", to_string(escape.event).c_str(), escape.t_reached);
  return 0;
}
