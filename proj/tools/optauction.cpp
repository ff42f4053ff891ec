// Command-line front end.
//
// Exit status: 0 success, 1 a verification or regularity check failed,
// 2 malformed input (schema, structure, bids outside ranges, non-regular
// distributions), 3 demand cannot be covered.

#include <cstdint>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "optauction/auction.hpp"
#include "optauction/dist.hpp"
#include "optauction/error.hpp"
#include "optauction/io.hpp"
#include "optauction/mechanism.hpp"
#include "optauction/model.hpp"
#include "optauction/ocax.hpp"
#include "optauction/verify.hpp"

namespace {

using namespace optauction;
using Json = nlohmann::ordered_json;

constexpr int kExitCheckFailed = 1;
constexpr int kExitBadInput = 2;
constexpr int kExitInfeasible = 3;

struct Options {
  std::string scenario;
  std::string bids;
  std::string out = "-";
  std::uint64_t seed = 0;
  std::string mechanism = "optimal";
  int seller = 0;  // 1-based; 0 means every seller
  int bidder = 1;
  std::string mode = "dominant";
  std::size_t samples = 0;
  int grid = 0;
  int cost_points = 21;
  int capacity_points = 11;
};

// Structural problems other than infeasibility are input errors.
Scenario load_scenario(const std::string& path) {
  Scenario s = io::parse_scenario(io::read_file(path));
  const auto report = validate_scenario(s);
  for (const auto& issue : report.issues) {
    if (issue.kind != IssueKind::infeasible_demand) throw InvalidInputError("scenario: " + issue.message);
  }
  if (!report.ok()) throw InfeasibleError("scenario: " + report.issues.front().message);
  return s;
}

std::vector<SellerBid> load_bids(const Scenario& s, const std::string& path) {
  auto bids = io::parse_bids(io::read_file(path));
  validate_bids(s, bids);
  return bids;
}

ocax::XorScenario load_xor(const std::string& path) {
  auto s = io::parse_xor_scenario(io::read_file(path));
  const auto problems = ocax::validate(s);
  if (!problems.empty()) throw InvalidInputError("scenario: " + problems.front());
  return s;
}

// JSON goes to --out; when that is stdout the summary moves to stderr.
void emit(const Options& o, const std::string& document, const std::string& summary) {
  if (o.out == "-") {
    std::cerr << summary;
    std::cout << document;
  } else {
    io::write_file(o.out, document);
    std::cout << summary;
  }
}

std::string fmt(double v, int precision = 6) {
  std::ostringstream s;
  s << std::setprecision(precision) << v;
  return s.str();
}

class Table {
 public:
  explicit Table(std::vector<std::string> header) { rows_.push_back(std::move(header)); }
  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }
  std::string str() const {
    std::vector<std::size_t> width;
    for (const auto& r : rows_) {
      width.resize(std::max(width.size(), r.size()), 0);
      for (std::size_t k = 0; k < r.size(); ++k) width[k] = std::max(width[k], r[k].size());
    }
    std::ostringstream out;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      for (std::size_t k = 0; k < rows_[i].size(); ++k)
        out << (k ? "  " : "") << std::left << std::setw(static_cast<int>(width[k])) << rows_[i][k];
      out << '\n';
      if (i == 0) {
        for (std::size_t k = 0; k < width.size(); ++k) out << (k ? "  " : "") << std::string(width[k], '-');
        out << '\n';
      }
    }
    return out.str();
  }

 private:
  std::vector<std::vector<std::string>> rows_;
};

int cmd_run(const Options& o) {
  const Scenario s = load_scenario(o.scenario);
  const auto bids = load_bids(s, o.bids);
  const auto mech = make_mechanism(o.mechanism);
  const Outcome out = mech->run(s, bids);
  Table t({"seller", "cost", "capacity", "quantity", "payment"});
  for (std::size_t i = 0; i < bids.size(); ++i) {
    t.add({std::to_string(bids[i].seller_id), fmt(bids[i].cost), fmt(bids[i].capacity),
           fmt(out.allocation.quantities[i]), fmt(out.payments[i], 10)});
  }
  emit(o, io::write_outcome(s, mech->name(), out),
       t.str() + "total payment " + fmt(out.total_payment(), 10) + "\n");
  return 0;
}

int cmd_xor_run(const Options& o) {
  const auto s = load_xor(o.scenario);
  const auto result = ocax::solve_ocax(s);
  std::vector<ocax::OcaxPayment> payments;
  for (std::size_t i = 0; i < s.bidders.size(); ++i) payments.push_back(ocax::ocax_payment(s, i));
  Table t({"bidder", "bundle", "payment"});
  for (std::size_t i = 0; i < s.bidders.size(); ++i) {
    const auto c = result.selection.choice[i];
    t.add({std::to_string(s.bidders[i].id),
           c == ocax::Choice::first ? "1" : (c == ocax::Choice::second ? "2" : "-"),
           fmt(payments[i].payment, 10)});
  }
  emit(o, io::write_xor_outcome(s, result, payments),
       t.str() + "objective " + fmt(result.objective, 10) + "\n");
  return 0;
}

int cmd_xor_regions(const Options& o) {
  const auto s = load_xor(o.scenario);
  if (o.bidder < 1 || o.bidder > static_cast<int>(s.bidders.size()))
    throw InvalidInputError("--bidder out of range");
  const auto grid = ocax::region_partition(s, static_cast<std::size_t>(o.bidder - 1), o.grid > 0 ? o.grid : 64);
  std::size_t count[3] = {0, 0, 0};
  for (auto l : grid.labels) ++count[l - 1];
  std::ostringstream summary;
  summary << "bidder " << o.bidder << " on a " << grid.resolution << "x" << grid.resolution
          << " lattice: R1 " << count[0] << ", R2 " << count[1] << ", R3 " << count[2]
          << (grid.competitors_cover_alone ? " (competitors can cover alone)" : "") << "\n";
  for (const auto& v : grid.violations) summary << "violation: " << v.describe() << "\n";
  emit(o, ocax::region_csv(grid), summary.str());
  return grid.violations.empty() ? 0 : kExitCheckFailed;
}

Json condition_json(const verify::ConditionResult& c) {
  Json j;
  j["passed"] = c.passed;
  j["checked"] = c.checked;
  j["worst_excess"] = c.worst;
  j["detail"] = c.detail;
  return j;
}

int cmd_verify(const Options& o) {
  const Scenario s = load_scenario(o.scenario);
  const auto mech = make_mechanism(o.mechanism);
  verify::Mode mode;
  if (o.mode == "dominant") mode = verify::Mode::dominant;
  else if (o.mode == "bayesian") mode = verify::Mode::bayesian;
  else throw InvalidInputError("--mode must be dominant or bayesian");
  const verify::GridOptions grid{o.cost_points, o.capacity_points};

  std::vector<std::vector<SellerBid>> profiles;
  std::vector<SellerBid> truth;
  if (!o.bids.empty()) {
    profiles.push_back(load_bids(s, o.bids));
    truth = profiles.front();
  } else {
    profiles = verify::sample_truthful_profiles(s, o.samples > 0 ? o.samples : 8, o.seed);
    truth = verify::sample_truthful_profiles(s, 1, o.seed + 1).front();
  }
  if (o.seller < 0 || o.seller > static_cast<int>(s.sellers.size()))
    throw InvalidInputError("--seller out of range");

  Json report;
  report["mechanism"] = std::string(mech->name());
  report["mode"] = o.mode;
  report["seed"] = o.seed;
  report["profiles"] = profiles.size();
  Json details = Json::array();
  bool c1 = true, c2 = true, c3 = true;
  double worst_gap = 0.0;
  Table t({"seller", "cond1", "cond2", "cond3", "gap", "best bid"});
  for (std::size_t i = 0; i < s.sellers.size(); ++i) {
    if (o.seller != 0 && static_cast<int>(i) + 1 != o.seller) continue;
    const auto th = verify::check_incentive_conditions(*mech, s, i, profiles, mode, grid);
    const auto br = verify::best_response_gap(*mech, s, i, {truth[i].cost, truth[i].capacity},
                                              profiles, mode, grid);
    c1 = c1 && th.condition1.passed;
    c2 = c2 && th.condition2.passed;
    c3 = c3 && th.condition3.passed;
    worst_gap = std::max(worst_gap, br.gap);
    Json d;
    d["seller"] = s.sellers[i].id;
    d["condition1"] = condition_json(th.condition1);
    d["condition2"] = condition_json(th.condition2);
    d["condition3"] = condition_json(th.condition3);
    d["skipped_bids"] = th.skipped_bids;
    d["true_type"] = Json::array({truth[i].cost, truth[i].capacity});
    d["best_response_gap"] = br.gap;
    d["best_bid"] = Json::array({br.best_bid.cost, br.best_bid.capacity});
    d["truthful_utility"] = br.truthful_utility;
    details.push_back(d);
    const auto mark = [](bool ok) { return std::string(ok ? "pass" : "FAIL"); };
    t.add({std::to_string(s.sellers[i].id), mark(th.condition1.passed), mark(th.condition2.passed),
           mark(th.condition3.passed), fmt(br.gap, 10),
           "(" + fmt(br.best_bid.cost) + ", " + fmt(br.best_bid.capacity) + ")"});
  }
  const bool gap_ok = worst_gap <= verify::kDeterministicTolerance;
  report["condition1"] = c1;
  report["condition2"] = c2;
  report["condition3"] = c3;
  report["best_response_gap"] = worst_gap;
  report["details"] = details;
  const bool ok = c1 && c2 && c3 && gap_ok;
  emit(o, report.dump(2) + "\n", t.str() + (ok ? "all checks passed\n" : "checks FAILED\n"));
  return ok ? 0 : kExitCheckFailed;
}

int cmd_compare(const Options& o) {
  const Scenario s = load_scenario(o.scenario);
  const std::size_t samples = o.samples > 0 ? o.samples : 200;
  Json report;
  report["samples"] = samples;
  report["seed"] = o.seed;
  report["mechanisms"] = Json::array();
  Table t({"mechanism", "mean cost", "std error"});
  for (const auto& name : mechanism_names()) {
    if (name == "kth-price" && s.items.size() != 1) continue;
    const auto mech = make_mechanism(name);
    const auto c = verify::expected_cost(*mech, s, samples, o.seed);
    Json j;
    j["name"] = name;
    j["mean"] = c.mean;
    j["standard_error"] = c.standard_error;
    report["mechanisms"].push_back(j);
    t.add({name, fmt(c.mean, 10), fmt(c.standard_error, 4)});
  }
  emit(o, report.dump(2) + "\n", t.str());
  return 0;
}

int cmd_regularity(const Options& o) {
  const Scenario s = load_scenario(o.scenario);
  const int grid = o.grid > 0 ? o.grid : 32;
  Json report;
  report["grid"] = grid;
  report["sellers"] = Json::array();
  bool all = true;
  Table t({"seller", "regular", "violation"});
  for (const auto& sp : s.sellers) {
    const auto r = dist::is_regular(sp.distribution, grid);
    all = all && r.regular;
    Json j;
    j["seller"] = sp.id;
    j["regular"] = r.regular;
    j["violation"] = r.violation ? Json(r.violation->describe()) : Json(nullptr);
    report["sellers"].push_back(j);
    t.add({std::to_string(sp.id), r.regular ? "yes" : "NO", r.violation ? r.violation->describe() : ""});
  }
  report["regular"] = all;
  emit(o, report.dump(2) + "\n", t.str());
  return all ? 0 : kExitCheckFailed;
}

template <typename F>
int guarded(F&& f) {
  try {
    return f();
  } catch (const io::SchemaError& e) {
    std::cerr << "error: schema violation at " << e.what() << "\n";
    return kExitBadInput;
  } catch (const InfeasibleError& e) {
    std::cerr << "error: infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const InvalidInputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const NotRegularError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCheckFailed;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal procurement auctions for single-minded and XOR-minded sellers"};
  app.require_subcommand(1);
  Options o;

  const auto scenario_flag = [&](CLI::App* cmd) {
    cmd->add_option("--scenario", o.scenario, "Scenario JSON file")->required()->check(CLI::ExistingFile);
  };
  const auto out_flag = [&](CLI::App* cmd, const std::string& what) {
    cmd->add_option("--out", o.out, what + " output path ('-' for stdout)")->capture_default_str();
  };

  auto* run = app.add_subcommand("run", "Run a mechanism on reported bids");
  scenario_flag(run);
  run->add_option("--bids", o.bids, "Bids JSON file")->required()->check(CLI::ExistingFile);
  run->add_option("--mechanism", o.mechanism, "optimal, kth-price or posted-price")->capture_default_str();
  out_flag(run, "Outcome JSON");

  auto* xr = app.add_subcommand("xor", "XOR-minded bidders");
  xr->require_subcommand(1);
  auto* xrun = xr->add_subcommand("run", "Winner determination and payments");
  scenario_flag(xrun);
  out_flag(xrun, "Outcome JSON");
  auto* xreg = xr->add_subcommand("regions", "Label one bidder's cost square");
  scenario_flag(xreg);
  xreg->add_option("--bidder", o.bidder, "Bidder id")->capture_default_str();
  xreg->add_option("--grid", o.grid, "Lattice points per axis (default 64)");
  out_flag(xreg, "CSV");

  auto* ver = app.add_subcommand("verify", "Check incentive conditions empirically");
  scenario_flag(ver);
  ver->add_option("--mechanism", o.mechanism, "optimal, kth-price or posted-price")->capture_default_str();
  ver->add_option("--bids", o.bids, "Fixed opponent profile (also the true types)")->check(CLI::ExistingFile);
  ver->add_option("--seller", o.seller, "Seller id to check (default: all)");
  ver->add_option("--mode", o.mode, "dominant or bayesian")->capture_default_str();
  ver->add_option("--samples", o.samples, "Sampled opponent profiles without --bids (default 8)");
  ver->add_option("--seed", o.seed, "Random seed")->capture_default_str();
  ver->add_option("--cost-points", o.cost_points, "Cost lattice points")->capture_default_str();
  ver->add_option("--capacity-points", o.capacity_points, "Capacity lattice points")->capture_default_str();
  out_flag(ver, "Report JSON");

  auto* cmp = app.add_subcommand("compare", "Expected total payment of each mechanism");
  scenario_flag(cmp);
  cmp->add_option("--samples", o.samples, "Monte Carlo samples (default 200)");
  cmp->add_option("--seed", o.seed, "Random seed")->capture_default_str();
  out_flag(cmp, "Report JSON");

  auto* reg = app.add_subcommand("regularity", "Lattice check of every seller's virtual cost");
  scenario_flag(reg);
  reg->add_option("--grid", o.grid, "Lattice points per axis (default 32)");
  out_flag(reg, "Report JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitBadInput;
  }

  if (*run) return guarded([&] { return cmd_run(o); });
  if (*xrun) return guarded([&] { return cmd_xor_run(o); });
  if (*xreg) return guarded([&] { return cmd_xor_regions(o); });
  if (*ver) return guarded([&] { return cmd_verify(o); });
  if (*cmp) return guarded([&] { return cmd_compare(o); });
  if (*reg) return guarded([&] { return cmd_regularity(o); });
  return kExitBadInput;
}
