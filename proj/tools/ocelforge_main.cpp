// ocelforge: command-line pipeline over ERP snapshots.
//
//   ocelforge gen      --out DIR [generator options]
//   ocelforge gor      --snapshot DIR --master TABLE [--threshold N] [--max-distance N]
//   ocelforge classify --snapshot DIR --master TABLE [...]
//   ocelforge extract  --snapshot DIR (--plan FILE | --master TABLE) --out LOG [--flatten TYPE]
//   ocelforge flatten  --ocel LOG --case-type TYPE [--out CSV]
//   ocelforge serve    [--host H] [--port P] [--static DIR]
//
// Exit codes: 0 success, 1 validation failure, 2 data error.

#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ocelforge/error.hpp"
#include "ocelforge/extractor.hpp"
#include "ocelforge/json_io.hpp"
#include "ocelforge/pipeline.hpp"
#include "ocelforge/service.hpp"
#include "ocelforge/synth.hpp"

namespace fs = std::filesystem;
using namespace ocelforge;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitData = 2;

int exit_code_for(const Error& e) { return is_validation_error(e.code()) ? kExitValidation : kExitData; }

// Writes through a temporary file so a failed run never leaves partial output.
void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".partial";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
    out << content;
    if (!out) throw Error(ErrorCode::IoFailure, "write failed for " + path.string());
  }
  fs::rename(tmp, path);
}

void emit(const std::string& out_path, const json& doc) {
  const std::string text = doc.dump(2) + "\n";
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
  } else {
    write_file(out_path, text);
  }
}

struct GorArgs {
  std::string snapshot;
  std::string master;
  std::size_t threshold = 0;
  int max_distance = GorOptions{}.max_distance;
  std::vector<std::string> include;
  std::string rules_file;
  std::string out;

  void attach(CLI::App* cmd, bool master_required) {
    cmd->add_option("--snapshot", snapshot, "Snapshot directory (holds dd_fields.csv)")->required();
    auto* m = cmd->add_option("--master", master, "Master table");
    if (master_required) m->required();
    cmd->add_option("--threshold", threshold, "Drop tables with fewer rows than this");
    cmd->add_option("--max-distance", max_distance, "Maximum hop distance from the master")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--include", include, "Extra tables to add to the graph of relations")->delimiter(',');
    cmd->add_option("--rules", rules_file, "Classification rule file (JSON)");
  }

  GorOptions options() const {
    GorOptions opt;
    opt.row_threshold = threshold;
    opt.max_distance = max_distance;
    return opt;
  }

  ClassificationRules rules() const { return rules_file.empty() ? ClassificationRules{} : load_rules_file(rules_file); }
};

KeyFilter parse_filter(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw Error(ErrorCode::InvalidArgument, "filter must look like FIELD=v1,v2: " + text);
  }
  KeyFilter f;
  f.field = text.substr(0, eq);
  std::stringstream values(text.substr(eq + 1));
  std::string v;
  while (std::getline(values, v, ',')) {
    if (!v.empty()) f.allowed_values.insert(v);
  }
  return f;
}

fs::path sibling(const fs::path& out, const std::string& suffix) {
  fs::path p = out;
  p.replace_extension();
  p += suffix;
  return p;
}

ServiceServer* g_server = nullptr;

void handle_signal(int) {
  if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ocelforge - object-centric event log extraction from ERP snapshots"};
  app.require_subcommand(1);

  // gen
  synth::GenSpec spec;
  std::string gen_out;
  std::vector<int> years(spec.fiscal_years.begin(), spec.fiscal_years.end());
  std::vector<std::string> clients(spec.clients.begin(), spec.clients.end());
  auto* gen = app.add_subcommand("gen", "Generate a synthetic purchase-to-pay snapshot");
  gen->add_option("--out", gen_out, "Output directory")->required();
  gen->add_option("--seed", spec.seed, "Random seed");
  gen->add_option("--orders", spec.n_orders, "Number of purchase orders");
  gen->add_option("--items-min", spec.items_min, "Minimum items per order");
  gen->add_option("--items-max", spec.items_max, "Maximum items per order");
  gen->add_option("--change-rate", spec.change_rate, "Probability of a change document per item");
  gen->add_option("--fiscal-years", years, "Fiscal years")->delimiter(',');
  gen->add_option("--clients", clients, "Clients (MANDT values)")->delimiter(',');
  gen->add_option("--requisition-rate", spec.requisition_rate, "Requisition probability for extra items");
  gen->add_option("--reservation-rate", spec.reservation_rate, "Reservation probability per order");
  gen->add_option("--flow-documents", spec.flow_documents, "Document-flow chains (VBFA)");

  // gor
  GorArgs gor_args;
  auto* gor = app.add_subcommand("gor", "Build the graph of relations around a master table");
  gor_args.attach(gor, true);
  gor->add_option("--out", gor_args.out, "Output file (default: stdout)");

  // classify
  GorArgs cls_args;
  bool no_masters = false;
  auto* cls = app.add_subcommand("classify", "Classify the tables of the graph of relations");
  cls_args.attach(cls, true);
  cls->add_option("--out", cls_args.out, "Output file (default: stdout)");
  cls->add_flag("--no-include-masters", no_masters, "Do not add the masters of detail tables");

  // extract
  GorArgs ex_args;
  std::string plan_file, ex_out, report_file, flatten_type, flat_out, stats_out, change_strategy;
  std::vector<std::string> filters;
  bool transitive = false;
  unsigned jobs = 1;
  auto* ex = app.add_subcommand("extract", "Extract an OCEL from a snapshot");
  ex_args.attach(ex, false);
  ex->add_option("--plan", plan_file, "Extraction plan (JSON)");
  ex->add_option("--out", ex_out, "OCEL output file")->required();
  ex->add_option("--report", report_file, "Run report (default: <out>.report.json)");
  ex->add_option("--filter", filters, "Key filter FIELD=v1,v2 (repeatable)");
  ex->add_option("--change-strategy", change_strategy, "tcode, field or semantic");
  ex->add_flag("--transitive", transitive, "Enrich events transitively through links");
  ex->add_option("--flatten", flatten_type, "Also flatten by this object type");
  ex->add_option("--flat-out", flat_out, "Flat CSV (default: <out>.<type>.csv)");
  ex->add_option("--stats-out", stats_out, "Flattening stats (default: <out>.<type>.stats.json)");
  ex->add_option("--jobs", jobs, "Tables processed in parallel")->check(CLI::PositiveNumber);

  // flatten
  std::string fl_ocel, fl_type, fl_out, fl_stats;
  auto* fl = app.add_subcommand("flatten", "Flatten an OCEL by a case notion");
  fl->add_option("--ocel", fl_ocel, "OCEL JSON file")->required();
  fl->add_option("--case-type", fl_type, "Object type used as case notion")->required();
  fl->add_option("--out", fl_out, "Flat CSV (default: stdout)");
  fl->add_option("--stats-out", fl_stats, "Stats JSON (default: stderr summary only)");

  // serve
  std::string host = "127.0.0.1", static_dir;
  int port = port_from_env();
  unsigned serve_jobs = 1;
  auto* serve = app.add_subcommand("serve", "Run the HTTP extraction service");
  serve->add_option("--host", host, "Listen address");
  serve->add_option("--port", port, "Listen port (default: OCELFORGE_PORT or 5000)");
  serve->add_option("--static", static_dir, "Directory served at / (web UI bundle)");
  serve->add_option("--jobs", serve_jobs, "Tables processed in parallel per extraction");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitValidation;
  }

  if (*gen) {
    try {
      spec.fiscal_years = {years.begin(), years.end()};
      spec.clients = {clients.begin(), clients.end()};
      const auto manifest = synth::generate(spec, gen_out);
      std::size_t rows = 0;
      for (const auto& [t, n] : manifest.row_counts) rows += n;
      std::cerr << "wrote " << manifest.row_counts.size() << " tables, " << rows << " rows to " << gen_out << "\n";
      return kExitOk;
    } catch (const Error& e) {
      std::cerr << "error: " << e.what() << "\n";
      return exit_code_for(e);
    }
  }

  if (*gor || *cls) {
    const GorArgs& a = *gor ? gor_args : cls_args;
    try {
      const Catalog catalog = load_catalog(a.snapshot);
      GraphOfRelations g = build_gor(catalog, a.master, a.options());
      if (!a.include.empty()) g = extend_gor(g, catalog, {a.include.begin(), a.include.end()});
      if (*gor) {
        emit(a.out, gor_to_json(g, &catalog));
      } else {
        const auto rules = a.rules();
        Classification c = no_masters ? classify_all(catalog, g, rules) : classify_including_masters(catalog, g, rules);
        json doc = classification_to_json(c);
        doc["gor"] = gor_to_json(g, &catalog, &c.categories);
        emit(a.out, doc);
      }
      return kExitOk;
    } catch (const Error& e) {
      std::cerr << "error: " << e.what() << "\n";
      return exit_code_for(e);
    }
  }

  if (*ex) {
    const fs::path out(ex_out);
    const fs::path report = report_file.empty() ? fs::path(out.string() + ".report.json") : fs::path(report_file);
    json rep = {{"command", "extract"}, {"snapshot", ex_args.snapshot}, {"out", ex_out}};
    int rc = kExitOk;
    try {
      if (plan_file.empty() && ex_args.master.empty()) {
        throw Error(ErrorCode::InvalidArgument, "either --plan or --master is required");
      }
      const Catalog catalog = load_catalog(ex_args.snapshot);
      const auto rules = ex_args.rules();
      ExtractionPlan plan =
          plan_file.empty()
              ? default_plan(catalog, ex_args.master, ex_args.options(), rules,
                             {ex_args.include.begin(), ex_args.include.end()})
              : load_plan_file(plan_file, catalog, rules);
      for (const auto& f : filters) plan.filters.push_back(parse_filter(f));
      if (!change_strategy.empty()) {
        auto cs = parse_change_strategy(change_strategy);
        if (!cs) throw Error(ErrorCode::InvalidArgument, "unknown change strategy " + change_strategy);
        plan.change_strategy = *cs;
      }
      if (transitive) plan.transitive_links = true;

      const Lookups lookups = load_lookups(catalog.data_root());
      const ExtractionResult result = run_extraction(catalog, plan, lookups, rules, jobs);
      const auto& d = result.diagnostics;
      rep["counts"] = {{"rows_scanned", d.rows_scanned},
                       {"events", d.events},
                       {"objects", d.objects},
                       {"links", d.links_harvested},
                       {"skipped_no_timestamp", d.skipped_no_timestamp}};
      rep["diagnostics"] = diagnostics_to_json(d);
      rep["plan"] = plan_to_json(validate_plan(plan, catalog));

      std::string flat_csv;
      json stats;
      if (!flatten_type.empty()) {
        const FlatLog flat = flatten(result.log, flatten_type);
        std::ostringstream csv;
        write_flat_csv(csv, flat);
        flat_csv = csv.str();
        stats = flatten_stats_to_json(flat, convergence_stats(result.log, flatten_type), divergence_stats(flat));
      }

      write_file(out, serialize_json(result.log));
      if (!flatten_type.empty()) {
        const fs::path fp = flat_out.empty() ? sibling(out, "." + flatten_type + ".csv") : fs::path(flat_out);
        const fs::path sp = stats_out.empty() ? sibling(out, "." + flatten_type + ".stats.json") : fs::path(stats_out);
        write_file(fp, flat_csv);
        write_file(sp, stats.dump(2) + "\n");
        rep["flatten"] = {{"case_type", flatten_type}, {"csv", fp.string()}, {"stats", sp.string()}};
        rep["stats"] = stats;
      }
      for (const auto& w : d.warnings) std::cerr << "warning: " << w << "\n";
      std::cerr << "extracted " << d.events << " events, " << d.objects << " objects from " << d.rows_scanned
                << " rows\n";
    } catch (const Error& e) {
      rc = exit_code_for(e);
      rep["error"] = {{"error", std::string(to_string(e.code()))}, {"message", e.what()}};
      std::cerr << "error: " << e.what() << "\n";
    } catch (const std::exception& e) {
      rc = kExitData;
      rep["error"] = {{"error", "InternalError"}, {"message", e.what()}};
      std::cerr << "error: " << e.what() << "\n";
    }
    rep["status"] = rc == kExitOk ? "ok" : "failed";
    rep["exit_code"] = rc;
    try {
      write_file(report, rep.dump(2) + "\n");
    } catch (const std::exception& e) {
      std::cerr << "error: cannot write report: " << e.what() << "\n";
      if (rc == kExitOk) rc = kExitData;
    }
    return rc;
  }

  if (*fl) {
    try {
      std::ifstream in(fl_ocel, std::ios::binary);
      if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read " + fl_ocel);
      std::stringstream buf;
      buf << in.rdbuf();
      const OcelLog log = deserialize_json(buf.str());
      const FlatLog flat = flatten(log, fl_type);
      std::ostringstream csv;
      write_flat_csv(csv, flat);
      const json stats = flatten_stats_to_json(flat, convergence_stats(log, fl_type), divergence_stats(flat));
      if (fl_out.empty() || fl_out == "-") {
        std::cout << csv.str();
      } else {
        write_file(fl_out, csv.str());
      }
      if (!fl_stats.empty()) write_file(fl_stats, stats.dump(2) + "\n");
      std::cerr << "cases " << flat.cases.size() << ", entries " << flat.entry_count() << ", duplication factor "
                << stats["convergence"]["duplication_factor"] << ", diverging pairs "
                << stats["divergence"]["diverging_pairs"] << "\n";
      return kExitOk;
    } catch (const Error& e) {
      std::cerr << "error: " << e.what() << "\n";
      return exit_code_for(e);
    }
  }

  if (*serve) {
    ServiceOptions opt;
    opt.jobs = std::max(1u, serve_jobs);
    if (!static_dir.empty()) opt.static_dir = static_dir;
    ExtractorService service(opt);
    ServiceServer server(service);
    const int bound = server.bind(host, port);
    if (bound < 0) {
      std::cerr << "error: cannot bind " << host << ":" << port << "\n";
      return kExitData;
    }
    g_server = &server;
    std::signal(SIGINT, handle_signal);
    std::signal(SIGTERM, handle_signal);
    std::cerr << "listening on http://" << host << ":" << bound << "\n";
    server.listen();
    g_server = nullptr;
    return kExitOk;
  }
  return kExitValidation;
}
