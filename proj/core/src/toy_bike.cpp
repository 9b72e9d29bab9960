#include <cmath>
#include <cstdint>
#include <numbers>
#include <variant>
#include <vector>

#include "artic/bike_rig.hpp"
#include "artic/errors.hpp"

namespace artic {

namespace {

constexpr double kShC0 = 0.28209479177387814;  // DC basis constant

// Splittable deterministic RNG (xorshift-based splitmix64); independent of
// libstdc++ distribution internals so fixtures are stable by construction.
struct Rng {
    std::uint64_t state;

    explicit Rng(std::uint64_t seed) : state(seed ^ 0x9e3779b97f4a7c15ull) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
};

struct Tube {
    Vec3 a, b;
    double radius;

    double area() const { return 2.0 * std::numbers::pi * radius * (b - a).norm(); }

    Vec3 sample(Rng& rng) const {
        const Vec3 axis = (b - a).normalized();
        Vec3 ortho = std::abs(axis.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
        const Vec3 u = axis.cross(ortho).normalized();
        const Vec3 v = axis.cross(u);
        const double t = rng.uniform();
        const double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
        return a + t * (b - a) + radius * (std::cos(phi) * u + std::sin(phi) * v);
    }
};

// Torus with its axis along Z (a wheel standing in the X-Y plane).
struct Torus {
    Vec3 center;
    double major, minor;

    double area() const {
        return 4.0 * std::numbers::pi * std::numbers::pi * major * minor;
    }

    Vec3 sample(Rng& rng) const {
        // Rejection on the tube angle keeps the sampling area-uniform.
        const double ratio = minor / major;
        double theta, phi;
        do {
            theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
            phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
        } while (rng.uniform() > (1.0 + ratio * std::cos(phi)) / (1.0 + ratio));
        const double ring = major + minor * std::cos(phi);
        return center + Vec3(ring * std::cos(theta), ring * std::sin(theta),
                             minor * std::sin(phi));
    }
};

using Primitive = std::variant<Tube, Torus>;

double primitive_area(const Primitive& p) {
    return std::visit([](const auto& s) { return s.area(); }, p);
}

Vec3 primitive_sample(const Primitive& p, Rng& rng) {
    return std::visit([&](const auto& s) { return s.sample(rng); }, p);
}

GaussianSet sample_part(const std::vector<Primitive>& primitives, int density,
                        const Vec3& base_color, Rng& rng) {
    GaussianSet set;
    set.sh_degree = 1;
    std::vector<double> cumulative;
    double total = 0.0;
    for (const auto& p : primitives) {
        total += primitive_area(p);
        cumulative.push_back(total);
    }

    const int per_channel = set.coeffs_per_channel();
    for (int i = 0; i < density; ++i) {
        const double pick = rng.uniform(0.0, total);
        std::size_t idx = 0;
        while (idx + 1 < cumulative.size() && cumulative[idx] < pick) {
            ++idx;
        }
        const Vec3 p = primitive_sample(primitives[idx], rng);
        set.means.push_back({float(p.x()), float(p.y()), float(p.z())});

        const UnitQuat q = UnitQuat::from_components(
            rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0),
            rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), 0.0);
        set.rotations.push_back({float(q.w), float(q.x), float(q.y), float(q.z)});

        const double log_scale = std::log(0.012) + rng.uniform(-0.3, 0.3);
        set.log_scales.push_back({float(log_scale),
                                  float(log_scale + rng.uniform(-0.2, 0.2)),
                                  float(log_scale + rng.uniform(-0.2, 0.2))});

        for (int c = 0; c < 3; ++c) {
            const double color = base_color[c] + rng.uniform(-0.05, 0.05);
            set.sh_coeffs.push_back(float((color - 0.5) / kShC0));
            for (int k = 1; k < per_channel; ++k) {
                set.sh_coeffs.push_back(float(rng.uniform(-0.04, 0.04)));
            }
        }
        set.opacities.push_back(float(rng.uniform(2.0, 5.0)));
    }
    return set;
}

}  // namespace

BikeParts make_toy_bike(std::uint64_t seed, int density) {
    if (density < 1) {
        throw SchemaError("toy bike density must be >= 1");
    }

    // Canonical layout: ground X-Z plane, front wheel along +X, pedal axle
    // on the vertical through the origin, steering shaft vertical through
    // the front axle so Eq-style planar steering and the angle-derivation
    // round trips are exact.
    const double wheel_y = 0.35;
    const Vec3 rear_axle(-0.55, wheel_y, 0.0);
    const Vec3 front_axle(0.55, wheel_y, 0.0);
    const Vec3 pedal_axle(0.0, 0.32, 0.0);
    const Vec3 seat(-0.20, 0.92, 0.0);
    const Vec3 steer_top(0.55, 0.95, 0.0);
    const double bar_y = 0.97, bar_half = 0.25;
    const double crank = 0.17;

    std::vector<Primitive> frame = {
        Torus{rear_axle, 0.315, 0.035},
        Tube{pedal_axle, Vec3(-0.20, 0.88, 0.0), 0.025},        // seat tube
        Tube{Vec3(-0.26, 0.92, 0.0), Vec3(-0.12, 0.92, 0.0), 0.035},  // saddle
        Tube{pedal_axle, Vec3(0.52, 0.78, 0.0), 0.025},         // down tube
        Tube{Vec3(-0.19, 0.85, 0.0), Vec3(0.53, 0.82, 0.0), 0.02},    // top tube
        Tube{Vec3(0.0, 0.32, 0.03), Vec3(-0.55, 0.35, 0.03), 0.012},
        Tube{Vec3(0.0, 0.32, -0.03), Vec3(-0.55, 0.35, -0.03), 0.012},
        Tube{Vec3(-0.20, 0.85, 0.03), Vec3(-0.55, 0.35, 0.03), 0.012},
        Tube{Vec3(-0.20, 0.85, -0.03), Vec3(-0.55, 0.35, -0.03), 0.012},
    };

    std::vector<Primitive> pedals = {
        Tube{Vec3(0.0, 0.32, -0.05), Vec3(0.0, 0.32, 0.05), 0.02},  // axle
        Tube{Vec3(0.0, 0.32, 0.05), Vec3(crank, 0.32, 0.08), 0.015},
        Tube{Vec3(0.0, 0.32, -0.05), Vec3(-crank, 0.32, -0.08), 0.015},
        Tube{Vec3(crank, 0.32, 0.08), Vec3(crank, 0.32, 0.15), 0.03},
        Tube{Vec3(-crank, 0.32, -0.08), Vec3(-crank, 0.32, -0.15), 0.03},
    };

    std::vector<Primitive> steering = {
        Torus{front_axle, 0.315, 0.035},
        Tube{Vec3(0.55, 0.60, 0.0), steer_top, 0.022},  // steer tube
        Tube{Vec3(0.55, 0.62, 0.035), Vec3(0.55, wheel_y, 0.035), 0.012},
        Tube{Vec3(0.55, 0.62, -0.035), Vec3(0.55, wheel_y, -0.035), 0.012},
        Tube{steer_top, Vec3(0.55, bar_y, 0.0), 0.018},  // stem
        Tube{Vec3(0.55, bar_y, -bar_half), Vec3(0.55, bar_y, bar_half), 0.015},
    };

    BikeParts parts;
    Rng rng_frame(seed * 3 + 0);
    Rng rng_pedals(seed * 3 + 1);
    Rng rng_steering(seed * 3 + 2);
    parts.frame_rear = sample_part(frame, density, Vec3(0.72, 0.18, 0.16), rng_frame);
    parts.pedals = sample_part(pedals, density, Vec3(0.20, 0.20, 0.22), rng_pedals);
    parts.steering_front =
        sample_part(steering, density, Vec3(0.22, 0.36, 0.70), rng_steering);

    parts.keypoints.points = {
        {"seat", seat},
        {"steer_axle_top", steer_top},
        {"steer_axle_bottom", front_axle},
        {"handle_L", Vec3(0.55, bar_y, bar_half)},
        {"handle_R", Vec3(0.55, bar_y, -bar_half)},
        {"pedal_axle", pedal_axle},
        {"pedal_L", Vec3(crank, 0.32, 0.115)},
        {"pedal_R", Vec3(-crank, 0.32, -0.115)},
        {"wheel_axle_front", front_axle},
        {"wheel_axle_rear", rear_axle},
        {"ground_origin", Vec3::Zero()},
    };

    parts.validate();
    return parts;
}

}  // namespace artic
