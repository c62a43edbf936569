#include "ocelforge/synth.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <random>

#include "ocelforge/csv.hpp"
#include "ocelforge/error.hpp"

namespace fs = std::filesystem;
namespace chr = std::chrono;

namespace ocelforge::synth {

namespace {

struct FieldDef {
  const char* field;
  const char* domain;
  bool key;
};

struct TableDef {
  const char* name;
  std::vector<FieldDef> fields;
};

struct DomainDef {
  const char* name;
  const char* kind;
  const char* description;
};

const std::vector<DomainDef>& domain_defs() {
  static const std::vector<DomainDef> defs = {
      {"AWKEY", "CODE", "Reference key"},
      {"BANFN", "CODE", "Purchase requisition number"},
      {"BELNR_D", "CODE", "Accounting document number"},
      {"BLART", "TEXT", "Document type"},
      {"BNFPO", "NUM", "Requisition item"},
      {"BSART", "TEXT", "Purchasing document type"},
      {"BUKRS", "TEXT", "Company code"},
      {"BUZEI", "NUM", "Line item"},
      {"BWART", "TEXT", "Movement type"},
      {"CDCHANGENR", "CODE", "Change document number"},
      {"CDCHNGIND", "TEXT", "Change indicator"},
      {"CDFLDNAME", "TEXT", "Changed field name"},
      {"CDOBJECTCL", "CODE", "Change document object class"},
      {"CDOBJECTV", "CODE", "Change document object value"},
      {"CDTABKEY", "TEXT", "Changed table key"},
      {"CDVALUE", "TEXT", "Changed value"},
      {"DATUM", "DATE", "Date"},
      {"EBELN", "CODE", "Purchasing document number"},
      {"EBELP", "CODE", "Purchasing document item"},
      {"EKORG", "TEXT", "Purchasing organization"},
      {"ETENR", "NUM", "Schedule line"},
      {"GJAHR", "NUM", "Fiscal year"},
      {"LIFNR", "TEXT", "Vendor"},
      {"LTSNR", "TEXT", "Vendor subrange"},
      {"MANDT", "CODE", "Client"},
      {"MATNR", "TEXT", "Material"},
      {"MBLNR", "CODE", "Material document number"},
      {"MENGE", "NUM", "Quantity"},
      {"PARVW", "TEXT", "Partner function"},
      {"PARZA", "NUM", "Partner counter"},
      {"POSNR", "NUM", "Sales document item"},
      {"RE_BELNR", "CODE", "Invoice document number"},
      {"RSART", "TEXT", "Record type"},
      {"RSNUM", "CODE", "Reservation number"},
      {"RSPOS", "NUM", "Reservation item"},
      {"SHKZG", "TEXT", "Debit/credit indicator"},
      {"TABNAME", "TEXT", "Table name"},
      {"TCODE", "CODE", "Transaction code"},
      {"USNAM", "TEXT", "User name"},
      {"UZEIT", "TIME", "Time"},
      {"VBELN", "CODE", "Sales and distribution document number"},
      {"VBTYP", "CODE", "Document category"},
      {"VGABE", "TEXT", "Transaction type"},
      {"WAERS", "TEXT", "Currency"},
      {"WERKS", "TEXT", "Plant"},
      {"WERT", "NUM", "Amount"},
      {"ZEKKN", "NUM", "Account assignment"},
  };
  return defs;
}

const TableDef kEban{"EBAN",
                     {{"MANDT", "MANDT", true},
                      {"BANFN", "BANFN", true},
                      {"BNFPO", "BNFPO", true},
                      {"MATNR", "MATNR", false},
                      {"MENGE", "MENGE", false},
                      {"PREIS", "WERT", false},
                      {"BADAT", "DATUM", false},
                      {"ERNAM", "USNAM", false}}};
const TableDef kEkko{"EKKO",
                     {{"MANDT", "MANDT", true},
                      {"EBELN", "EBELN", true},
                      {"BUKRS", "BUKRS", false},
                      {"BSART", "BSART", false},
                      {"LIFNR", "LIFNR", false},
                      {"AEDAT", "DATUM", false},
                      {"ERNAM", "USNAM", false},
                      {"NETWR", "WERT", false},
                      {"WAERS", "WAERS", false}}};
const TableDef kEkpo{"EKPO",
                     {{"MANDT", "MANDT", true},
                      {"EBELN", "EBELN", true},
                      {"EBELP", "EBELP", true},
                      {"MATNR", "MATNR", false},
                      {"BANFN", "BANFN", false},
                      {"BNFPO", "BNFPO", false},
                      {"MENGE", "MENGE", false},
                      {"NETPR", "WERT", false},
                      {"NETWR", "WERT", false}}};
const TableDef kEkpa{"EKPA",
                     {{"MANDT", "MANDT", true},
                      {"EBELN", "EBELN", true},
                      {"EKORG", "EKORG", true},
                      {"LTSNR", "LTSNR", true},
                      {"WERKS", "WERKS", true},
                      {"PARVW", "PARVW", true},
                      {"PARZA", "PARZA", true},
                      {"LIFN2", "LIFNR", false}}};
const TableDef kEket{"EKET",
                     {{"MANDT", "MANDT", true},
                      {"EBELN", "EBELN", true},
                      {"EBELP", "EBELP", true},
                      {"ETENR", "ETENR", true},
                      {"EINDT", "DATUM", false},
                      {"MENGE", "MENGE", false}}};
const TableDef kEkbe{"EKBE",
                     {{"MANDT", "MANDT", true},
                      {"EBELN", "EBELN", true},
                      {"EBELP", "EBELP", true},
                      {"ZEKKN", "ZEKKN", true},
                      {"VGABE", "VGABE", true},
                      {"GJAHR", "GJAHR", true},
                      {"BELNR", "MBLNR", true},
                      {"BUZEI", "BUZEI", true},
                      {"BWART", "BWART", false},
                      {"BUDAT", "DATUM", false},
                      {"MENGE", "MENGE", false},
                      {"DMBTR", "WERT", false}}};
const TableDef kRbkp{"RBKP",
                     {{"MANDT", "MANDT", true},
                      {"BELNR", "RE_BELNR", true},
                      {"GJAHR", "GJAHR", true},
                      {"BLART", "BLART", false},
                      {"BLDAT", "DATUM", false},
                      {"BUDAT", "DATUM", false},
                      {"CPUDT", "DATUM", false},
                      {"CPUTM", "UZEIT", false},
                      {"TCODE", "TCODE", false},
                      {"LIFNR", "LIFNR", false},
                      {"RMWWR", "WERT", false},
                      {"WAERS", "WAERS", false},
                      {"USNAM", "USNAM", false}}};
const TableDef kRseg{"RSEG",
                     {{"MANDT", "MANDT", true},
                      {"BELNR", "RE_BELNR", true},
                      {"GJAHR", "GJAHR", true},
                      {"BUZEI", "BUZEI", true},
                      {"EBELN", "EBELN", false},
                      {"EBELP", "EBELP", false},
                      {"MATNR", "MATNR", false},
                      {"MENGE", "MENGE", false},
                      {"WRBTR", "WERT", false}}};
const TableDef kBkpf{"BKPF",
                     {{"MANDT", "MANDT", true},
                      {"BUKRS", "BUKRS", true},
                      {"BELNR", "BELNR_D", true},
                      {"GJAHR", "GJAHR", true},
                      {"BLART", "BLART", false},
                      {"BLDAT", "DATUM", false},
                      {"BUDAT", "DATUM", false},
                      {"CPUDT", "DATUM", false},
                      {"CPUTM", "UZEIT", false},
                      {"TCODE", "TCODE", false},
                      {"AWKEY", "AWKEY", false},
                      {"USNAM", "USNAM", false},
                      {"WAERS", "WAERS", false}}};
const TableDef kBseg{"BSEG",
                     {{"MANDT", "MANDT", true},
                      {"BUKRS", "BUKRS", true},
                      {"BELNR", "BELNR_D", true},
                      {"GJAHR", "GJAHR", true},
                      {"BUZEI", "BUZEI", true},
                      {"EBELN", "EBELN", false},
                      {"EBELP", "EBELP", false},
                      {"LIFNR", "LIFNR", false},
                      {"SHKZG", "SHKZG", false},
                      {"DMBTR", "WERT", false}}};
const TableDef kRkpf{"RKPF",
                     {{"MANDT", "MANDT", true},
                      {"RSNUM", "RSNUM", true},
                      {"RSDAT", "DATUM", false},
                      {"USNAM", "USNAM", false},
                      {"BWART", "BWART", false}}};
const TableDef kResb{"RESB",
                     {{"MANDT", "MANDT", true},
                      {"RSNUM", "RSNUM", true},
                      {"RSPOS", "RSPOS", true},
                      {"RSART", "RSART", true},
                      {"MATNR", "MATNR", false},
                      {"EBELN", "EBELN", false},
                      {"EBELP", "EBELP", false},
                      {"BDMNG", "MENGE", false},
                      {"BDTER", "DATUM", false}}};
const TableDef kCdhdr{"CDHDR",
                      {{"MANDT", "MANDT", true},
                       {"OBJECTCLAS", "CDOBJECTCL", true},
                       {"OBJECTID", "CDOBJECTV", true},
                       {"CHANGENR", "CDCHANGENR", true},
                       {"USERNAME", "USNAM", false},
                       {"UDATE", "DATUM", false},
                       {"UTIME", "UZEIT", false},
                       {"TCODE", "TCODE", false}}};
const TableDef kCdpos{"CDPOS",
                      {{"MANDT", "MANDT", true},
                       {"OBJECTCLAS", "CDOBJECTCL", true},
                       {"OBJECTID", "CDOBJECTV", true},
                       {"CHANGENR", "CDCHANGENR", true},
                       {"TABNAME", "TABNAME", true},
                       {"TABKEY", "CDTABKEY", true},
                       {"FNAME", "CDFLDNAME", true},
                       {"CHNGIND", "CDCHNGIND", true},
                       {"VALUE_NEW", "CDVALUE", false},
                       {"VALUE_OLD", "CDVALUE", false}}};
const TableDef kVbfa{"VBFA",
                     {{"MANDT", "MANDT", true},
                      {"VBELV", "VBELN", true},
                      {"POSNV", "POSNR", true},
                      {"VBELN", "VBELN", true},
                      {"POSNN", "POSNR", true},
                      {"VBTYP_N", "VBTYP", true},
                      {"VBTYP_V", "VBTYP", false},
                      {"ERDAT", "DATUM", false},
                      {"ERZET", "UZEIT", false},
                      {"RFMNG", "MENGE", false}}};

const std::vector<std::pair<const char*, const char*>> kTcodes = {
    {"F-28", "Enter incoming payment"},   {"F-53", "Enter outgoing payment"},
    {"ME21N", "Create purchase order"},   {"ME22N", "Change purchase order"},
    {"ME51N", "Create purchase requisition"}, {"MIGO", "Goods movement"},
    {"MIRO", "Enter incoming invoice"},
};

using Rows = std::vector<std::vector<std::string>>;

class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [lo, hi]; rejection sampling keeps results identical across
  // standard libraries.
  std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi) {
    const std::uint64_t span = hi - lo + 1;
    if (span == 0) return engine_();
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return lo + x % span;
  }

  bool chance(double p) {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return u < p;
  }

  template <typename Range>
  const auto& pick(const Range& r) {
    auto it = r.begin();
    std::advance(it, static_cast<std::ptrdiff_t>(uniform(0, r.size() - 1)));
    return *it;
  }

private:
  std::mt19937_64 engine_;
};

std::string padded(std::uint64_t value, int width) {
  std::string s = std::to_string(value);
  if (static_cast<int>(s.size()) < width) s.insert(0, static_cast<std::size_t>(width) - s.size(), '0');
  return s;
}

// Zero-padded 10-digit numbers within a two-digit prefix range.
class Sequence {
public:
  explicit Sequence(std::uint64_t prefix) : base_(prefix * 100000000ULL) {}
  std::string next() { return padded(base_ + ++counter_, 10); }

private:
  std::uint64_t base_;
  std::uint64_t counter_ = 0;
};

std::string cents(std::uint64_t value) {
  return std::to_string(value / 100) + "." + padded(value % 100, 2);
}

std::string ymd(chr::sys_days day) {
  const chr::year_month_day d{day};
  return padded(static_cast<std::uint64_t>(static_cast<int>(d.year())), 4) +
         padded(static_cast<unsigned>(d.month()), 2) + padded(static_cast<unsigned>(d.day()), 2);
}

std::string hms(Rng& rng) {
  return padded(rng.uniform(7, 18), 2) + padded(rng.uniform(0, 59), 2) + padded(rng.uniform(0, 59), 2);
}

std::string object_id(const char* field, const char* domain, const std::string& value) {
  return std::string(field) + "-" + domain + ":" + value;
}

void write_table(const fs::path& dir, const TableDef& def, const Rows& rows) {
  std::ofstream out(dir / (std::string(def.name) + ".csv"), std::ios::binary);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + (dir / def.name).string() + ".csv");
  std::vector<std::string> header;
  for (const auto& f : def.fields) header.emplace_back(f.field);
  csv::write_row(out, header);
  for (const auto& r : rows) csv::write_row(out, r);
  if (!out) throw Error(ErrorCode::IoFailure, std::string("write failed for ") + def.name);
}

void write_metadata(const fs::path& dir, const std::vector<const TableDef*>& tables) {
  std::set<std::string> used;
  for (const auto* t : tables) {
    for (const auto& f : t->fields) used.insert(f.domain);
  }
  {
    std::ofstream out(dir / "dd_domains.csv", std::ios::binary);
    if (!out) throw Error(ErrorCode::IoFailure, "cannot write dd_domains.csv");
    csv::write_row(out, {"DOMNAME", "KIND", "DESCRIPTION"});
    for (const auto& d : domain_defs()) {
      if (used.count(d.name)) csv::write_row(out, {d.name, d.kind, d.description});
    }
  }
  std::ofstream out(dir / "dd_fields.csv", std::ios::binary);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write dd_fields.csv");
  csv::write_row(out, {"TABNAME", "FIELDNAME", "DOMNAME", "KEYFLAG", "POSITION"});
  for (const auto* t : tables) {
    int pos = 0;
    for (const auto& f : t->fields) {
      const std::string position = std::to_string(++pos);
      csv::write_row(out, {t->name, f.field, f.domain, f.key ? "X" : "", position});
    }
  }
}

void write_lookup(const fs::path& file, std::initializer_list<std::string_view> header,
                  const std::vector<std::pair<const char*, const char*>>& entries) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + file.string());
  csv::write_row(out, header);
  for (const auto& [k, v] : entries) csv::write_row(out, {k, v});
}

}  // namespace

const std::vector<std::string>& p2p_tables() {
  static const std::vector<std::string> tables = {"BKPF", "BSEG", "EBAN", "EKBE", "EKET", "EKKO",
                                                  "EKPA", "EKPO", "RBKP", "RESB", "RKPF", "RSEG"};
  return tables;
}

void validate(const GenSpec& spec) {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidArgument, what); };
  if (spec.n_orders == 0) fail("n_orders must be positive");
  if (spec.items_min == 0) fail("items_min must be at least 1");
  if (spec.items_min > spec.items_max) fail("items_min must not exceed items_max");
  for (double p : {spec.change_rate, spec.requisition_rate, spec.reservation_rate}) {
    if (!(p >= 0.0 && p <= 1.0)) fail("rates must lie in [0, 1]");
  }
  if (spec.fiscal_years.empty()) fail("fiscal_years must not be empty");
  if (spec.clients.empty()) fail("clients must not be empty");
  for (int y : spec.fiscal_years) {
    if (y < 1900 || y > 9998) fail("fiscal year out of range: " + std::to_string(y));
  }
}

Manifest generate(const GenSpec& spec, const fs::path& out_dir) {
  validate(spec);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir)) {
    throw Error(ErrorCode::IoFailure, "cannot create " + out_dir.string());
  }

  Rng rng(spec.seed);
  Sequence banfn(10), ebeln(45), re_belnr(51), belnr_d(15), mblnr(50), rsnum(20), changenr(0);
  std::uint64_t ebelp_counter = 0;

  Rows eban, ekko, ekpo, ekpa, eket, ekbe, rbkp, rseg, bkpf, bseg, rkpf, resb, cdhdr, cdpos, vbfa;
  Manifest manifest;
  manifest.spec = spec;

  static const std::vector<std::string> users = {"BAUER", "FISCHER", "KLEIN", "MUELLER",
                                                 "SCHMIDT", "SCHULZ", "WAGNER", "WEBER"};
  static const std::vector<std::string> company_codes = {"1000", "2000"};

  for (std::size_t o = 0; o < spec.n_orders; ++o) {
    OrderTruth truth;
    const std::string mandt = rng.pick(spec.clients);
    const int year = rng.pick(spec.fiscal_years);
    const std::string gjahr = std::to_string(year);
    const std::string bukrs = rng.pick(company_codes);
    const std::string lifnr = padded(100000 + rng.uniform(1, 50), 10);
    const std::string buyer = rng.pick(users);
    const chr::sys_days jan1{chr::year{year} / chr::January / 1};
    const chr::sys_days order_day = jan1 + chr::days{static_cast<int>(rng.uniform(10, 280))};
    const std::size_t n_items = static_cast<std::size_t>(rng.uniform(spec.items_min, spec.items_max));

    truth.ebeln = ebeln.next();
    truth.client = mandt;
    truth.fiscal_year = year;
    truth.objects.push_back(object_id("EBELN", "EBELN", truth.ebeln));

    struct Item {
      std::string ebelp, matnr;
      std::uint64_t qty, price;
      chr::sys_days delivery;
    };
    std::vector<Item> items;
    std::uint64_t order_total = 0;
    for (std::size_t i = 0; i < n_items; ++i) {
      Item it;
      it.ebelp = padded(++ebelp_counter, 10);
      it.matnr = "MAT" + padded(rng.uniform(1, 200), 5);
      it.qty = rng.uniform(1, 50);
      it.price = rng.uniform(500, 500000);
      it.delivery = order_day + chr::days{static_cast<int>(rng.uniform(5, 20))};
      order_total += it.qty * it.price;

      std::string req, req_item;
      if (i == 0 || rng.chance(spec.requisition_rate)) {
        req = banfn.next();
        req_item = "00010";
        const auto req_day = order_day - chr::days{static_cast<int>(rng.uniform(1, 5))};
        eban.push_back({mandt, req, req_item, it.matnr, std::to_string(it.qty), cents(it.price), ymd(req_day),
                        rng.pick(users)});
        truth.requisitions.push_back(req);
        truth.chain.push_back({"requisition", "EBAN", req, ymd(req_day)});
        truth.objects.push_back(object_id("BANFN", "BANFN", req));
      }
      ekpo.push_back({mandt, truth.ebeln, it.ebelp, it.matnr, req, req_item, std::to_string(it.qty),
                      cents(it.price), cents(it.qty * it.price)});
      eket.push_back({mandt, truth.ebeln, it.ebelp, "0001", ymd(it.delivery), std::to_string(it.qty)});
      truth.items.push_back(it.ebelp);
      truth.objects.push_back(object_id("EBELP", "EBELP", it.ebelp));
      items.push_back(std::move(it));
    }
    ekko.push_back({mandt, truth.ebeln, bukrs, "NB", lifnr, ymd(order_day), buyer, cents(order_total), "EUR"});
    ekpa.push_back({mandt, truth.ebeln, "1000", "0001", "1000", "LF", "001", lifnr});
    truth.chain.push_back({"order", "EKKO", truth.ebeln, ymd(order_day)});

    // goods receipt: one material document per order, one line per item
    truth.material_doc = mblnr.next();
    chr::sys_days receipt_day = order_day;
    for (std::size_t i = 0; i < items.size(); ++i) {
      const auto& it = items[i];
      receipt_day = std::max(receipt_day, it.delivery);
      ekbe.push_back({mandt, truth.ebeln, it.ebelp, "00", "1", gjahr, truth.material_doc, padded(i + 1, 4), "101",
                      ymd(it.delivery), std::to_string(it.qty), cents(it.qty * it.price)});
    }
    truth.chain.push_back({"goods_receipt", "EKBE", truth.material_doc, ymd(receipt_day)});
    truth.objects.push_back(object_id("BELNR", "MBLNR", truth.material_doc));

    // invoice
    truth.invoice = re_belnr.next();
    const auto invoice_day = receipt_day + chr::days{static_cast<int>(rng.uniform(1, 10))};
    rbkp.push_back({mandt, truth.invoice, gjahr, "RE", ymd(receipt_day), ymd(invoice_day), ymd(invoice_day),
                    hms(rng), "MIRO", lifnr, cents(order_total), "EUR", rng.pick(users)});
    for (std::size_t i = 0; i < items.size(); ++i) {
      const auto& it = items[i];
      rseg.push_back({mandt, truth.invoice, gjahr, padded(i + 1, 6), truth.ebeln, it.ebelp, it.matnr,
                      std::to_string(it.qty), cents(it.qty * it.price)});
    }
    truth.chain.push_back({"invoice", "RBKP", truth.invoice, ymd(invoice_day)});
    truth.objects.push_back(object_id("BELNR", "RE_BELNR", truth.invoice));

    // payment
    truth.payment = belnr_d.next();
    const auto pay_day = invoice_day + chr::days{static_cast<int>(rng.uniform(5, 30))};
    bkpf.push_back({mandt, bukrs, truth.payment, gjahr, "KZ", ymd(pay_day), ymd(pay_day), ymd(pay_day), hms(rng),
                    "F-53", truth.invoice + gjahr, rng.pick(users), "EUR"});
    for (std::size_t i = 0; i < items.size(); ++i) {
      const auto& it = items[i];
      bseg.push_back({mandt, bukrs, truth.payment, gjahr, padded(i + 1, 3), truth.ebeln, it.ebelp, lifnr, "S",
                      cents(it.qty * it.price)});
    }
    truth.chain.push_back({"payment", "BKPF", truth.payment, ymd(pay_day)});
    truth.objects.push_back(object_id("BELNR", "BELNR_D", truth.payment));

    // reservation
    if (rng.chance(spec.reservation_rate)) {
      truth.reservation = rsnum.next();
      const auto res_day = order_day + chr::days{static_cast<int>(rng.uniform(1, 10))};
      rkpf.push_back({mandt, truth.reservation, ymd(res_day), rng.pick(users), "201"});
      for (std::size_t i = 0; i < items.size(); ++i) {
        const auto& it = items[i];
        resb.push_back({mandt, truth.reservation, padded(i + 1, 4), "R", it.matnr, truth.ebeln, it.ebelp,
                        std::to_string(it.qty), ymd(it.delivery)});
      }
      truth.chain.push_back({"reservation", "RKPF", truth.reservation, ymd(res_day)});
      truth.objects.push_back(object_id("RSNUM", "RSNUM", truth.reservation));
    }

    // change documents
    for (const auto& it : items) {
      if (!rng.chance(spec.change_rate)) continue;
      const std::string nr = changenr.next();
      const auto change_day = order_day + chr::days{static_cast<int>(rng.uniform(1, 6))};
      cdhdr.push_back({mandt, "EINKBELEG", truth.ebeln, nr, rng.pick(users), ymd(change_day), hms(rng), "ME22N"});
      if (rng.chance(0.5)) {
        const std::uint64_t new_price = it.price + rng.uniform(1, it.price / 5 + 1);
        cdpos.push_back({mandt, "EINKBELEG", truth.ebeln, nr, "EKPO", mandt + truth.ebeln + it.ebelp, "NETPR", "U",
                         cents(new_price), cents(it.price)});
      } else {
        const auto new_day = it.delivery + chr::days{static_cast<int>(rng.uniform(1, 7))};
        cdpos.push_back({mandt, "EINKBELEG", truth.ebeln, nr, "EKET", mandt + truth.ebeln + it.ebelp + "0001",
                         "EINDT", "U", ymd(new_day), ymd(it.delivery)});
      }
      if (truth.changes.empty()) truth.objects.push_back(object_id("OBJECTID", "EINKBELEG", truth.ebeln));
      truth.changes.push_back(nr);
      truth.chain.push_back({"change", "CDHDR", nr, ymd(change_day)});
    }
    manifest.orders.push_back(std::move(truth));
  }

  // document flow fixture: sales order -> delivery -> invoice
  Sequence sales(0), delivery(80), billing(90);
  for (std::size_t f = 0; f < spec.flow_documents; ++f) {
    const std::string mandt = rng.pick(spec.clients);
    const int year = *spec.fiscal_years.begin();
    const chr::sys_days day = chr::sys_days{chr::year{year} / chr::January / 1} +
                              chr::days{static_cast<int>(rng.uniform(10, 300))};
    const auto qty = std::to_string(rng.uniform(1, 20));
    const std::string so = sales.next(), dl = delivery.next(), inv = billing.next();
    const auto dl_day = day + chr::days{static_cast<int>(rng.uniform(1, 10))};
    const auto inv_day = dl_day + chr::days{static_cast<int>(rng.uniform(1, 10))};
    vbfa.push_back({mandt, so, "000010", dl, "000010", "J", "C", ymd(dl_day), hms(rng), qty});
    vbfa.push_back({mandt, dl, "000010", inv, "000010", "M", "J", ymd(inv_day), hms(rng), qty});
  }
  manifest.flow_chains = spec.flow_documents;

  std::vector<std::pair<const TableDef*, const Rows*>> tables = {
      {&kBkpf, &bkpf}, {&kBseg, &bseg}, {&kEban, &eban}, {&kEkbe, &ekbe}, {&kEket, &eket}, {&kEkko, &ekko},
      {&kEkpa, &ekpa}, {&kEkpo, &ekpo}, {&kRbkp, &rbkp}, {&kResb, &resb}, {&kRkpf, &rkpf}, {&kRseg, &rseg},
  };
  if (spec.change_rate > 0.0) {
    tables.insert(tables.begin(), {&kCdpos, &cdpos});
    tables.insert(tables.begin(), {&kCdhdr, &cdhdr});
  }
  if (spec.flow_documents > 0) tables.push_back({&kVbfa, &vbfa});

  std::vector<const TableDef*> defs;
  for (const auto& [def, rows] : tables) {
    defs.push_back(def);
    write_table(out_dir, *def, *rows);
    manifest.row_counts[def->name] = rows->size();
  }
  write_metadata(out_dir, defs);
  write_lookup(out_dir / "tstct.csv", {"TCODE", "TTEXT"}, kTcodes);
  if (spec.flow_documents > 0) {
    write_lookup(out_dir / "doctypes.csv", {"CODE", "TEXT"}, {{"C", "Order"}, {"J", "Delivery"}, {"M", "Invoice"}});
  }

  std::ofstream mf(out_dir / "manifest.json", std::ios::binary);
  if (!mf) throw Error(ErrorCode::IoFailure, "cannot write manifest.json");
  mf << to_json(manifest).dump(2) << "\n";
  if (!mf) throw Error(ErrorCode::IoFailure, "write failed for manifest.json");
  return manifest;
}

nlohmann::json to_json(const GenSpec& spec) {
  return {{"seed", spec.seed},
          {"n_orders", spec.n_orders},
          {"items_per_order", {{"min", spec.items_min}, {"max", spec.items_max}}},
          {"change_rate", spec.change_rate},
          {"fiscal_years", spec.fiscal_years},
          {"clients", spec.clients},
          {"requisition_rate", spec.requisition_rate},
          {"reservation_rate", spec.reservation_rate},
          {"flow_documents", spec.flow_documents}};
}

nlohmann::json to_json(const Manifest& manifest) {
  nlohmann::json orders = nlohmann::json::array();
  for (const auto& o : manifest.orders) {
    nlohmann::json chain = nlohmann::json::array();
    for (const auto& s : o.chain) {
      chain.push_back({{"step", s.step}, {"table", s.table}, {"document", s.document}, {"date", s.date}});
    }
    orders.push_back({{"ebeln", o.ebeln},
                      {"client", o.client},
                      {"fiscal_year", o.fiscal_year},
                      {"items", o.items},
                      {"requisitions", o.requisitions},
                      {"material_document", o.material_doc},
                      {"invoice", o.invoice},
                      {"payment", o.payment},
                      {"reservation", o.reservation},
                      {"changes", o.changes},
                      {"chain", chain},
                      {"objects", o.objects}});
  }
  return {{"spec", to_json(manifest.spec)},
          {"row_counts", manifest.row_counts},
          {"flow_chains", manifest.flow_chains},
          {"orders", orders}};
}

}  // namespace ocelforge::synth
