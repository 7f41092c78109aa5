#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "xi/collision.hpp"
#include "xi/lattice.hpp"
#include "xi/multiplier.hpp"

namespace xi {

/// A-exceptional times of one path at step scale [epsilon, R].
///
/// t is exceptional when the recentred past window B[t-R .. t-eps] - B_t
/// and the recentred future window B[t+eps .. t+R] - B_t satisfy
/// past ∩ A*future = ∅ as lattice point sets.
struct ExceptionalScan {
    std::string path_ref;
    std::size_t epsilon = 1;
    std::size_t radius = 2;
    std::size_t stride = 1;
    std::vector<std::size_t> times;
    /// Grid positions tested / skipped because a window left the path.
    std::size_t scanned = 0;
    std::size_t skipped = 0;
    /// Set for scans whose windows are defined by realized radii, in which
    /// case epsilon and radius above are unused.
    std::optional<double> epsilon_radius;
    std::optional<double> outer_radius;
};

/// Stride 1 up to 1e5 steps, otherwise the smallest stride scanning at most
/// 1e5 positions.
std::size_t default_stride(std::size_t path_length);

/// Tests a single time; `state` is scratch space for `set`.
bool is_exceptional_time(const LatticePath& path, std::size_t t, std::size_t epsilon, std::size_t radius,
                         CollisionState& state);

/// Scans the grid t = 0, stride, 2*stride, ... <= length; positions whose
/// windows do not fit are skipped and counted. Requires a finite point set
/// and 0 < epsilon < radius.
ExceptionalScan find_exceptional_times(const LatticePath& path, const MultiplierSet& set, std::size_t epsilon,
                                       std::size_t radius, std::size_t stride, unsigned workers = 1,
                                       std::string path_ref = "path");

/// Radius-scale variant: the past window of t runs from the first k with
/// |B_{t-k} - B_t| >= epsilon_radius to the first k with |B_{t-k} - B_t| >=
/// radius (inclusive), and likewise for the future. A position whose window
/// runs off the path end is skipped unless the part inside the path already
/// shows an intersection (then it is simply not exceptional). Requires
/// 0 < epsilon_radius < radius.
ExceptionalScan find_exceptional_times_by_radius(const LatticePath& path, const MultiplierSet& set,
                                                 double epsilon_radius, double radius, std::size_t stride,
                                                 unsigned workers = 1, std::string path_ref = "path");

struct PivotReport {
    std::size_t t = 0;
    double max_angle = 0.0;
    double angular_resolution = 0.0;
    /// B_t itself is revisited inside a window, so no rotation about it helps.
    bool revisited = false;
    /// The scan stopped at the requested cap rather than at an intersection.
    bool capped = false;
};

/// Largest grid angle alpha = j * resolution such that rotating the future
/// polyline B[t+eps .. t+R] - B_t clockwise by every grid angle in
/// (0, alpha] keeps it disjoint from the past polyline B[t-R .. t-eps] - B_t
/// (equivalently, the past rotated counterclockwise). Segments within 1e-9
/// of each other count as intersecting. At most 2pi - resolution; with a cap
/// the scan stops once the cap is reached.
PivotReport max_pivot_angle(const LatticePath& path, std::size_t t, std::size_t epsilon, std::size_t radius,
                            double angular_resolution, std::optional<double> cap = std::nullopt);

/// Reusable scratch space for pivot angle computation at many times.
class PivotScanner {
  public:
    PivotScanner();
    ~PivotScanner();
    PivotScanner(PivotScanner&&) noexcept;
    PivotScanner& operator=(PivotScanner&&) noexcept;

    PivotReport measure(const LatticePath& path, std::size_t t, std::size_t epsilon, std::size_t radius,
                        double angular_resolution, std::optional<double> cap);

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Pivot reports for every grid time whose max angle reaches `min_angle`,
/// with the per-time scan capped at `cap` (if given).
std::vector<PivotReport> scan_pivots(const LatticePath& path, std::size_t epsilon, std::size_t radius,
                                     std::size_t stride, double angular_resolution, double min_angle,
                                     std::optional<double> cap, unsigned workers = 1);

struct BoxCount {
    std::size_t scale = 0;
    std::size_t boxes = 0;
};

struct BoxDimensionFit {
    double dimension = 0.0;
    double intercept = 0.0;
    double r_squared = 1.0;
    std::vector<BoxCount> counts;
};

/// Dyadic box sizes 2^4 .. 2^floor(log2(length)/2).
std::vector<std::size_t> default_box_scales(std::size_t path_length);

/// Least-squares slope of log N(delta) against log(1/delta), N(delta) being
/// the number of boxes [j delta, (j+1) delta) holding at least one time.
BoxDimensionFit box_dimension(std::span<const std::size_t> times, std::size_t total_length,
                              std::span<const std::size_t> scales);

}  // namespace xi
