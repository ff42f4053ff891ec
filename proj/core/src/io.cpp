#include "optauction/io.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

#include "json.hpp"

namespace optauction::io {
namespace {

using nlohmann::json;
using ordered = nlohmann::ordered_json;

std::string index_path(const std::string& base, std::size_t i) {
  return base + "[" + std::to_string(i) + "]";
}

std::string key_path(const std::string& base, std::string_view key) {
  return base.empty() ? std::string(key) : base + "." + std::string(key);
}

json parse_text(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError("$", std::string("malformed JSON: ") + e.what());
  }
}

void require_object(const json& j, const std::string& path,
                    std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) throw SchemaError(path.empty() ? "$" : path, "expected an object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (auto a : allowed) known = known || a == key;
    if (!known) throw SchemaError(key_path(path, key), "unknown field");
  }
}

const json& field(const json& j, const std::string& path, std::string_view key) {
  auto it = j.find(std::string(key));
  if (it == j.end()) throw SchemaError(key_path(path, key), "missing field");
  return *it;
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) throw SchemaError(path, "expected a number");
  return j.get<double>();
}

int integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw SchemaError(path, "expected an integer");
  return j.get<int>();
}

std::string string(const json& j, const std::string& path) {
  if (!j.is_string()) throw SchemaError(path, "expected a string");
  return j.get<std::string>();
}

const json& array(const json& j, const std::string& path) {
  if (!j.is_array()) throw SchemaError(path, "expected an array");
  return j;
}

std::vector<double> numbers(const json& j, const std::string& path) {
  std::vector<double> out;
  for (std::size_t i = 0; i < array(j, path).size(); ++i) out.push_back(number(j[i], index_path(path, i)));
  return out;
}

std::vector<std::string> strings(const json& j, const std::string& path) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < array(j, path).size(); ++i) out.push_back(string(j[i], index_path(path, i)));
  return out;
}

Interval interval(const json& j, const std::string& path) {
  const auto v = numbers(j, path);
  if (v.size() != 2) throw SchemaError(path, "expected [lo, hi]");
  return {v[0], v[1]};
}

dist::Family family(const json& j, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path, "expected an object");
  const std::string name = string(field(j, path, "family"), key_path(path, "family"));
  if (name == "independent_uniform") {
    require_object(j, path, {"family"});
    return dist::IndependentUniform{};
  }
  if (name == "capacity_linked_uniform") {
    require_object(j, path, {"family", "slope"});
    return dist::CapacityLinkedUniform{number(field(j, path, "slope"), key_path(path, "slope"))};
  }
  if (name == "tabulated_grid") {
    require_object(j, path, {"family", "mass"});
    const std::string mpath = key_path(path, "mass");
    const json& rows = array(field(j, path, "mass"), mpath);
    dist::TabulatedGrid grid;
    for (std::size_t r = 0; r < rows.size(); ++r) grid.mass.push_back(numbers(rows[r], index_path(mpath, r)));
    return grid;
  }
  throw SchemaError(key_path(path, "family"), "unknown family '" + name + "'");
}

ordered family_json(const dist::Family& f) {
  ordered out;
  if (std::holds_alternative<dist::IndependentUniform>(f)) {
    out["family"] = "independent_uniform";
  } else if (const auto* c = std::get_if<dist::CapacityLinkedUniform>(&f)) {
    out["family"] = "capacity_linked_uniform";
    out["slope"] = c->slope;
  } else {
    out["family"] = "tabulated_grid";
    out["mass"] = std::get<dist::TabulatedGrid>(f).mass;
  }
  return out;
}

dist::UnivariateSpec univariate(const json& j, const std::string& path, Interval support) {
  if (!j.is_object()) throw SchemaError(path, "expected an object");
  const std::string name = string(field(j, path, "family"), key_path(path, "family"));
  if (name == "uniform") {
    require_object(j, path, {"family"});
    return {support, dist::UniformShape{}};
  }
  if (name == "histogram") {
    require_object(j, path, {"family", "mass"});
    return {support, dist::HistogramShape{numbers(field(j, path, "mass"), key_path(path, "mass"))}};
  }
  throw SchemaError(key_path(path, "family"), "unknown family '" + name + "'");
}

ordered univariate_json(const dist::UnivariateSpec& spec) {
  ordered out;
  if (const auto* h = std::get_if<dist::HistogramShape>(&spec.shape)) {
    out["family"] = "histogram";
    out["mass"] = h->mass;
  } else {
    out["family"] = "uniform";
  }
  return out;
}

ordered interval_json(Interval v) { return ordered::array({v.lo, v.hi}); }

std::string dump(const ordered& j) { return j.dump(2) + "\n"; }

}  // namespace

Scenario parse_scenario(std::string_view text) {
  const json doc = parse_text(text);
  require_object(doc, "", {"items", "sellers"});
  Scenario s;
  const json& items = array(field(doc, "", "items"), "items");
  for (std::size_t i = 0; i < items.size(); ++i) {
    const std::string p = index_path("items", i);
    require_object(items[i], p, {"id", "demand"});
    s.items.push_back({string(field(items[i], p, "id"), key_path(p, "id")),
                       number(field(items[i], p, "demand"), key_path(p, "demand"))});
  }
  const json& sellers = array(field(doc, "", "sellers"), "sellers");
  for (std::size_t i = 0; i < sellers.size(); ++i) {
    const std::string p = index_path("sellers", i);
    const json& js = sellers[i];
    require_object(js, p, {"id", "bundle", "cost_range", "capacity_range", "distribution"});
    SellerSpec spec;
    spec.id = integer(field(js, p, "id"), key_path(p, "id"));
    spec.bundle = strings(field(js, p, "bundle"), key_path(p, "bundle"));
    spec.distribution.cost = interval(field(js, p, "cost_range"), key_path(p, "cost_range"));
    spec.distribution.capacity =
        interval(field(js, p, "capacity_range"), key_path(p, "capacity_range"));
    spec.distribution.family = family(field(js, p, "distribution"), key_path(p, "distribution"));
    s.sellers.push_back(std::move(spec));
  }
  return s;
}

std::string write_scenario(const Scenario& scenario) {
  ordered doc;
  doc["items"] = ordered::array();
  for (const auto& item : scenario.items) {
    ordered j;
    j["id"] = item.id;
    j["demand"] = item.demand;
    doc["items"].push_back(j);
  }
  doc["sellers"] = ordered::array();
  for (const auto& s : scenario.sellers) {
    ordered j;
    j["id"] = s.id;
    j["bundle"] = s.bundle;
    j["cost_range"] = interval_json(s.cost_range());
    j["capacity_range"] = interval_json(s.capacity_range());
    j["distribution"] = family_json(s.distribution.family);
    doc["sellers"].push_back(j);
  }
  return dump(doc);
}

std::vector<SellerBid> parse_bids(std::string_view text) {
  const json doc = parse_text(text);
  require_object(doc, "", {"bids"});
  const json& bids = array(field(doc, "", "bids"), "bids");
  std::vector<SellerBid> out;
  for (std::size_t i = 0; i < bids.size(); ++i) {
    const std::string p = index_path("bids", i);
    require_object(bids[i], p, {"seller", "cost", "capacity"});
    out.push_back({integer(field(bids[i], p, "seller"), key_path(p, "seller")),
                   number(field(bids[i], p, "cost"), key_path(p, "cost")),
                   number(field(bids[i], p, "capacity"), key_path(p, "capacity"))});
  }
  return out;
}

std::string write_bids(std::span<const SellerBid> bids) {
  ordered doc;
  doc["bids"] = ordered::array();
  for (const auto& b : bids) {
    ordered j;
    j["seller"] = b.seller_id;
    j["cost"] = b.cost;
    j["capacity"] = b.capacity;
    doc["bids"].push_back(j);
  }
  return dump(doc);
}

std::string write_outcome(const Scenario& scenario, std::string_view mechanism,
                          const Outcome& outcome) {
  ordered doc;
  doc["mechanism"] = std::string(mechanism);
  doc["allocation"] = ordered::array();
  doc["payments"] = ordered::array();
  for (std::size_t i = 0; i < scenario.sellers.size(); ++i) {
    ordered a;
    a["seller"] = scenario.sellers[i].id;
    a["quantity"] = outcome.allocation.quantities.at(i);
    doc["allocation"].push_back(a);
    ordered t;
    t["seller"] = scenario.sellers[i].id;
    t["amount"] = outcome.payments.at(i);
    doc["payments"].push_back(t);
  }
  doc["total_payment"] = outcome.total_payment();
  doc["objective"] = outcome.objective;
  doc["virtual_costs"] = outcome.virtual_costs;
  return dump(doc);
}

ocax::XorScenario parse_xor_scenario(std::string_view text) {
  const json doc = parse_text(text);
  require_object(doc, "", {"items", "bidders"});
  ocax::XorScenario s;
  s.items = strings(field(doc, "", "items"), "items");
  const json& bidders = array(field(doc, "", "bidders"), "bidders");
  for (std::size_t i = 0; i < bidders.size(); ++i) {
    const std::string p = index_path("bidders", i);
    const json& jb = bidders[i];
    require_object(jb, p, {"id", "bundle1", "bundle2", "cost_range", "distributions", "bids"});
    ocax::XorBidder b;
    b.id = integer(field(jb, p, "id"), key_path(p, "id"));
    b.bundles[0] = strings(field(jb, p, "bundle1"), key_path(p, "bundle1"));
    b.bundles[1] = strings(field(jb, p, "bundle2"), key_path(p, "bundle2"));
    b.cost_range = interval(field(jb, p, "cost_range"), key_path(p, "cost_range"));
    const std::string dpath = key_path(p, "distributions");
    const json& ds = array(field(jb, p, "distributions"), dpath);
    if (ds.size() != 2) throw SchemaError(dpath, "expected one distribution per bundle");
    for (int j = 0; j < 2; ++j) b.distributions[j] = univariate(ds[j], index_path(dpath, j), b.cost_range);
    const std::string bpath = key_path(p, "bids");
    const auto bids = numbers(field(jb, p, "bids"), bpath);
    if (bids.size() != 2) throw SchemaError(bpath, "expected [cost1, cost2]");
    b.bids = {bids[0], bids[1]};
    s.bidders.push_back(std::move(b));
  }
  return s;
}

std::string write_xor_scenario(const ocax::XorScenario& scenario) {
  ordered doc;
  doc["items"] = scenario.items;
  doc["bidders"] = ordered::array();
  for (const auto& b : scenario.bidders) {
    ordered j;
    j["id"] = b.id;
    j["bundle1"] = b.bundles[0];
    j["bundle2"] = b.bundles[1];
    j["cost_range"] = interval_json(b.cost_range);
    j["distributions"] = ordered::array({univariate_json(b.distributions[0]),
                                         univariate_json(b.distributions[1])});
    j["bids"] = ordered::array({b.bids[0], b.bids[1]});
    doc["bidders"].push_back(j);
  }
  return dump(doc);
}

std::string write_xor_outcome(const ocax::XorScenario& scenario, const ocax::OcaxResult& result,
                              std::span<const ocax::OcaxPayment> payments) {
  ordered doc;
  doc["objective"] = result.objective;
  doc["selection"] = ordered::array();
  doc["payments"] = ordered::array();
  for (std::size_t i = 0; i < scenario.bidders.size(); ++i) {
    ordered sel;
    sel["bidder"] = scenario.bidders[i].id;
    switch (result.selection.choice.at(i)) {
      case ocax::Choice::first: sel["bundle"] = 1; break;
      case ocax::Choice::second: sel["bundle"] = 2; break;
      case ocax::Choice::none: sel["bundle"] = nullptr; break;
    }
    sel["virtual_costs"] = ordered::array({result.virtual_costs.at(i)[0], result.virtual_costs.at(i)[1]});
    doc["selection"].push_back(sel);

    ordered pay;
    pay["bidder"] = scenario.bidders[i].id;
    pay["amount"] = payments[i].payment;
    ordered critical = ordered::array();
    for (const auto& c : payments[i].critical_cost) {
      if (c) critical.push_back(*c);
      else critical.push_back(nullptr);
    }
    pay["critical_cost"] = critical;
    doc["payments"].push_back(pay);
  }
  return dump(doc);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInputError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInputError("cannot write " + path.string());
  out << contents;
  if (!out) throw InvalidInputError("cannot write " + path.string());
}

}  // namespace optauction::io
