#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "optauction/dist.hpp"
#include "optauction/step_function.hpp"
#include "optauction/types.hpp"

// Optimal unit-demand combinatorial procurement with XOR-minded bidders: each
// bidder offers either of two disjoint bundles, never both. Winner
// determination minimises total virtual cost over 0/1 selections; payments
// integrate the winning indicators along an axis-parallel path through the
// bidder's cost square.
namespace optauction::ocax {

inline constexpr double kPathTolerance = 1e-6;

struct XorBidder {
  int id = 0;
  std::array<std::vector<std::string>, 2> bundles;
  Interval cost_range;
  std::array<dist::UnivariateSpec, 2> distributions;  // supports equal cost_range
  std::array<double, 2> bids{};                       // reported bundle costs

  friend bool operator==(const XorBidder&, const XorBidder&) = default;
};

struct XorScenario {
  std::vector<std::string> items;
  std::vector<XorBidder> bidders;

  friend bool operator==(const XorScenario&, const XorScenario&) = default;
};

enum class Choice : std::uint8_t { none = 0, first = 1, second = 2 };

struct XorSelection {
  std::vector<Choice> choice;  // per bidder
  bool selected(std::size_t bidder, int bundle) const {
    return choice[bidder] == (bundle == 0 ? Choice::first : Choice::second);
  }
};

// Structural problems: overlapping or empty bundles, unknown items, bids out
// of range, more than 64 items, uncoverable items.
std::vector<std::string> validate(const XorScenario& scenario);

// Bundles as item bitmasks and their objective coefficients.
struct CoverProblem {
  std::size_t num_items = 0;
  std::vector<std::array<std::uint64_t, 2>> masks;
  std::vector<std::array<double, 2>> costs;
};

CoverProblem cover_problem(const XorScenario& scenario,
                           const std::vector<std::array<double, 2>>& costs);

struct CoverSolution {
  XorSelection selection;
  double objective = 0.0;
  long nodes = 0;
};

// Exact depth-first branch and bound. Bidders are branched in index order,
// trying bundle 1, bundle 2, then nothing; an incumbent is replaced only on a
// strict improvement, so among equal-cost optima the first in that order
// wins. The bound adds to the running cost every negative remaining
// coefficient plus, over uncovered items, the largest cheapest single bundle
// that covers it (a relaxation that ignores XOR). Returns nullopt when no
// feasible cover exists.
std::optional<CoverSolution> solve_cover(const CoverProblem& problem);

struct OcaxOptions {
  int regularity_grid = 64;
  bool check_regularity = true;
  int scan_steps = 64;        // coarse scan per payment leg
  double resolution = 1e-9;   // bisection width
};

struct OcaxResult {
  XorSelection selection;
  double objective = 0.0;
  std::vector<std::array<double, 2>> virtual_costs;
};

// Winner determination on the reported costs. Throws NotRegularError,
// InvalidInputError or InfeasibleError.
OcaxResult solve_ocax(const XorScenario& scenario, const OcaxOptions& options = {});

struct OcaxPayment {
  Choice won = Choice::none;
  double payment = 0.0;
  double utility_integral = 0.0;      // along (ĉ1,ĉ2)→(c̄,ĉ2)→(c̄,c̄)
  double utility_integral_alt = 0.0;  // along (ĉ1,ĉ2)→(ĉ1,c̄)→(c̄,c̄)
  // Highest cost at which the bidder still wins bundle j while the other
  // bundle is reported at c̄; nullopt if it never wins it.
  std::array<std::optional<double>, 2> critical_cost;
};

// Payment of one bidder with every other bid fixed:
// T = ĉ1·x1 + ĉ2·x2 + U, U the path integral of the winning indicators with
// U(c̄, c̄) = 0. Throws IntegrabilityError when the two axis orders disagree
// by more than kPathTolerance and MonotonicityError when an indicator rises
// along its own cost.
OcaxPayment ocax_payment(const XorScenario& scenario, std::size_t bidder,
                         const OcaxOptions& options = {});

// Indicator values (x1, x2) of `bidder` when it reports `costs` and the others
// keep their bids.
std::array<int, 2> win_indicators(const XorScenario& scenario, std::size_t bidder,
                                  std::array<double, 2> costs);

struct RegionViolation {
  enum class Kind { region1_not_downward_closed, region2_not_downward_closed, top_corner_wins };
  Kind kind;
  int first_row = 0, first_col = 0;
  int second_row = 0, second_col = 0;
  std::string describe() const;
};

// Labels on a resolution x resolution lattice of the bidder's cost square:
// 1 wins bundle 1, 2 wins bundle 2, 3 loses. Row index walks the bundle-1
// cost, column index the bundle-2 cost.
struct RegionGrid {
  int resolution = 0;
  std::vector<double> axis;
  std::vector<std::uint8_t> labels;  // row-major
  bool competitors_cover_alone = false;
  std::vector<RegionViolation> violations;

  int label(int row, int col) const { return labels[static_cast<std::size_t>(row) * resolution + col]; }
};

// Labels every lattice point and checks that region 1 is downward closed in
// the bundle-1 cost at every fixed bundle-2 cost (and symmetrically for region
// 2), and that (c̄, c̄) loses whenever the other bidders can cover alone.
RegionGrid region_partition(const XorScenario& scenario, std::size_t bidder, int resolution,
                            const OcaxOptions& options = {});

std::string region_csv(const RegionGrid& grid);

}  // namespace optauction::ocax
