#pragma once

// Deterministic generator for a small SAP-like purchase-to-pay snapshot:
// metadata, one CSV per table, transaction-code lookup and a manifest with
// the ground truth per order.

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace ocelforge::synth {

struct GenSpec {
  std::uint64_t seed = 42;
  std::size_t n_orders = 100;
  std::size_t items_min = 1;
  std::size_t items_max = 3;
  double change_rate = 0.0;  // probability per order item of a change document
  std::set<int> fiscal_years{2021, 2022};
  std::set<std::string> clients{"800"};
  // Probability that an order item beyond the first has its own requisition;
  // the first item always has one.
  double requisition_rate = 0.5;
  // Probability that an order gets a reservation (RKPF + one RESB per item).
  double reservation_rate = 0.3;
  // Number of order -> delivery -> invoice chains in a document-flow table
  // (VBFA); 0 emits no flow table.
  std::size_t flow_documents = 0;
};

// Throws Error(InvalidArgument) when the spec breaks its invariants.
void validate(const GenSpec& spec);

struct ChainStep {
  std::string step;      // requisition, order, goods_receipt, invoice, payment, reservation, change
  std::string table;
  std::string document;  // document number
  std::string date;      // YYYYMMDD
};

struct OrderTruth {
  std::string ebeln;
  std::string client;
  int fiscal_year = 0;
  std::vector<std::string> items;         // EBELP values
  std::vector<std::string> requisitions;  // BANFN values, one per item that has one
  std::string material_doc;
  std::string invoice;
  std::string payment;
  std::string reservation;               // empty when none
  std::vector<std::string> changes;      // CHANGENR values
  std::vector<ChainStep> chain;
  // Object ids ("<field>-<domain>:<value>") the order's documents relate.
  std::vector<std::string> objects;
};

struct Manifest {
  GenSpec spec;
  std::map<std::string, std::size_t> row_counts;  // per table
  std::vector<OrderTruth> orders;
  std::size_t flow_chains = 0;
};

// The twelve purchase-to-pay tables every snapshot carries.
const std::vector<std::string>& p2p_tables();

// Writes dd_fields.csv, dd_domains.csv, tstct.csv, the table CSVs and
// manifest.json into out_dir (created if needed). Same spec => same bytes.
// Throws Error(IoFailure) when out_dir cannot be written.
Manifest generate(const GenSpec& spec, const std::filesystem::path& out_dir);

nlohmann::json to_json(const GenSpec& spec);
nlohmann::json to_json(const Manifest& manifest);

}  // namespace ocelforge::synth
