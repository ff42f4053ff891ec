#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "optauction/error.hpp"
#include "optauction/model.hpp"
#include "optauction/ocax.hpp"

// JSON documents read and written by the command-line tool. Writers are
// canonical (fixed key order, shortest round-trip number formatting), so
// parse(write(x)) == x.
namespace optauction::io {

// A document that does not match its schema. path() is the offending field,
// e.g. "sellers[2].cost_range[1]".
class SchemaError : public InvalidInputError {
 public:
  SchemaError(std::string path, const std::string& message)
      : InvalidInputError(path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

Scenario parse_scenario(std::string_view text);
std::string write_scenario(const Scenario& scenario);

std::vector<SellerBid> parse_bids(std::string_view text);
std::string write_bids(std::span<const SellerBid> bids);

std::string write_outcome(const Scenario& scenario, std::string_view mechanism,
                          const Outcome& outcome);

ocax::XorScenario parse_xor_scenario(std::string_view text);
std::string write_xor_scenario(const ocax::XorScenario& scenario);

std::string write_xor_outcome(const ocax::XorScenario& scenario, const ocax::OcaxResult& result,
                              std::span<const ocax::OcaxPayment> payments);

// Throws InvalidInputError when the file cannot be read or written.
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace optauction::io
