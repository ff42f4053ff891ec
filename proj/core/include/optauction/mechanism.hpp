#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "optauction/auction.hpp"
#include "optauction/model.hpp"

namespace optauction {

// What one seller receives from a run.
struct SellerResult {
  double quantity = 0.0;
  double payment = 0.0;
};

// A direct procurement mechanism: bids in, quantities and payments out.
// Implementations are stateless; every member is const and may be called
// concurrently.
class Mechanism {
 public:
  virtual ~Mechanism() = default;

  virtual std::string_view name() const = 0;

  virtual std::vector<double> allocate(const Scenario& scenario,
                                       std::span<const SellerBid> bids) const = 0;

  virtual Outcome run(const Scenario& scenario, std::span<const SellerBid> bids) const = 0;

  // Quantity and payment of one seller. Defaults to run().
  virtual SellerResult run_for(const Scenario& scenario, std::span<const SellerBid> bids,
                               std::size_t seller) const;

  // run_for() at each of `costs` with the seller's capacity fixed at
  // bids[seller].capacity. Mechanisms whose payment curve does not depend on
  // the seller's own cost override this to trace the curve once.
  virtual std::vector<SellerResult> run_for_costs(const Scenario& scenario,
                                                  std::span<const SellerBid> bids,
                                                  std::size_t seller,
                                                  std::span<const double> costs) const;
};

// The virtual-cost LP with curve-integral payments.
class OptimalAuction final : public Mechanism {
 public:
  explicit OptimalAuction(auction::AuctionOptions options = {}) : options_(options) {}

  std::string_view name() const override { return "optimal"; }
  std::vector<double> allocate(const Scenario& scenario,
                               std::span<const SellerBid> bids) const override;
  Outcome run(const Scenario& scenario, std::span<const SellerBid> bids) const override;
  SellerResult run_for(const Scenario& scenario, std::span<const SellerBid> bids,
                       std::size_t seller) const override;
  std::vector<SellerResult> run_for_costs(const Scenario& scenario,
                                          std::span<const SellerBid> bids, std::size_t seller,
                                          std::span<const double> costs) const override;

  const auction::AuctionOptions& options() const { return options_; }

 private:
  auction::AuctionOptions options_;
};

// Uniform-price k-th price auction; single-item scenarios only.
class KthPriceAuction final : public Mechanism {
 public:
  std::string_view name() const override { return "kth-price"; }
  std::vector<double> allocate(const Scenario& scenario,
                               std::span<const SellerBid> bids) const override;
  Outcome run(const Scenario& scenario, std::span<const SellerBid> bids) const override;
};

// Posts each seller the top of its cost range as a per-unit price, which every
// type accepts, and buys the cheapest cover at those prices.
class PostedPriceMechanism final : public Mechanism {
 public:
  std::string_view name() const override { return "posted-price"; }
  std::vector<double> allocate(const Scenario& scenario,
                               std::span<const SellerBid> bids) const override;
  Outcome run(const Scenario& scenario, std::span<const SellerBid> bids) const override;
};

// "optimal", "kth-price" or "posted-price"; throws InvalidInputError otherwise.
std::unique_ptr<Mechanism> make_mechanism(std::string_view name);

std::vector<std::string> mechanism_names();

}  // namespace optauction
