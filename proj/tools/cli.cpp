#include "cli.hpp"

#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "riskweave/http_server.hpp"
#include "riskweave/pipeline.hpp"
#include "riskweave/service.hpp"
#include "riskweave/session.hpp"
#include "riskweave/store.hpp"

namespace riskweave::cli {

namespace fs = std::filesystem;

namespace {

int exit_code(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::validation: return kValidation;
    case ErrorKind::computation: return kComputation;
    case ErrorKind::io: return kIo;
    case ErrorKind::not_found: return kIo;
  }
  return kValidation;
}

bool has_discrepancy_note(const ModelDocument& model, const std::string& context) {
  for (const ManifestNote& n : model.notes)
    if (n.kind == "discrepancy" && n.context == context) return true;
  return false;
}

int validate(const std::string& path, bool strict, bool notes, std::ostream& out, std::ostream& err) {
  const ModelDocument model = load_model_file(path);
  const auto judgments = model.judgments();
  const auto results = evaluate_contexts(model, judgments);

  out << fmt::format("{:<42} {:>2} {:>10} {:>9} {:>9} {:>5}  {:<7} {}\n", "context", "n",
                     "lambda_max", "CI", "CR", "RI", "flag", "reported");
  bool violation = false;
  for (const ContextResult& r : results) {
    if (!r.context.needs_judgments()) continue;
    const ConsistencyReport& c = r.consistency;
    std::string reported;
    if (const ContextMeta* meta = model.meta(r.context.id); meta && meta->reported_cr) {
      reported = fmt::format("{:.5f}", *meta->reported_cr);
      if (std::abs(*meta->reported_cr - c.cr) > 0.005)
        reported += has_discrepancy_note(model, r.context.id) ? " (documented discrepancy)" : " (differs)";
    }
    violation = violation || !c.acceptable();
    out << fmt::format("{:<42} {:>2} {:>10.5f} {:>9.5f} {:>9.5f} {:>5.2f}  {:<7} {}\n", r.context.id,
                       c.n, c.lambda_max, c.ci, c.cr, c.ri, c.acceptable() ? "ok" : "CR>0.1", reported);
    if (const MatrixRecord* rec = model.matrix(r.context.id)) {
      for (const AlternateReading& alt : rec->alternates) {
        const ConsistencyReport ac = consistency(alt.matrix, model.random_index);
        out << fmt::format("  alternate: {:<29} {:>2} {:>10.5f} {:>9.5f} {:>9.5f} {:>5.2f}  {:<7}\n",
                           alt.label, ac.n, ac.lambda_max, ac.ci, ac.cr, ac.ri,
                           ac.acceptable() ? "ok" : "CR>0.1");
      }
    }
  }

  const auto missing = missing_pairs(model.contexts, judgments);
  for (const MissingPair& m : missing)
    out << fmt::format("missing judgment: {} [{} / {}]\n", m.context, m.row, m.col);

  if (notes) {
    for (const std::string& w : model.warnings()) err << "note: " << w << '\n';
  } else if (!model.notes.empty()) {
    err << fmt::format("note: {} interpretation notes in the model manifest (--notes lists them)\n",
                       model.notes.size());
  }
  if (strict && (violation || !missing.empty())) {
    err << "error: consistency check failed (CR > 0.1 or missing judgments)\n";
    return kValidation;
  }
  return kOk;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot write '" + path.string() + "'");
  file << text;
  if (!file.flush()) throw IoError("cannot write '" + path.string() + "'");
}

void print_weights(const PipelineResult& r, std::ostream& out) {
  out << fmt::format("alternative weights ({}):\n", to_string(r.weights_source));
  for (std::size_t i = 0; i < r.used.alternatives.size(); ++i)
    out << fmt::format("  {:<12} raw {:.6f}  normal {:.6f}  ideal {:.6f}\n", r.used.alternatives[i],
                       r.used.raw[i], r.used.normals[i], r.used.ideals[i]);
  if (!r.records.empty())
    out << fmt::format("exponents ({}): S {:.4f}  O {:.4f}  D {:.4f}\n", r.exponent_source,
                       r.exponents.severity, r.exponents.occurrence, r.exponents.detection);
}

int solve(const std::string& path, const std::string& source, const std::string& out_dir,
          std::ostream& out) {
  const ModelDocument model = load_model_file(path);
  const auto judgments = model.judgments();
  const PipelineResult r = run_pipeline(model, judgments, {parse_weights_source(source)});

  std::error_code ec;
  const fs::path dir(out_dir);
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory '" + out_dir + "'");

  std::ostringstream csv;
  write_rpn_csv(csv, r.records);
  write_text(dir / "rpn_table.csv", csv.str());
  for (Stage s : {Stage::unweighted, Stage::weighted, Stage::limit}) {
    std::ostringstream m;
    write_supermatrix_csv(m, r.stage(s));
    write_text(dir / fmt::format("supermatrix_{}.csv", to_string(s)), m.str());
  }
  write_text(dir / "report.json",
             results_json(model, r, log_hash(std::span<const Judgment>(judgments))).dump(2) + "\n");

  print_weights(r, out);
  out << fmt::format("limit: power {}{}\n", r.limit.power, r.limit.cesaro ? " (Cesaro average)" : "");
  out << "wrote rpn_table.csv, supermatrix_{unweighted,weighted,limit}.csv, report.json to "
      << dir.string() << '\n';
  return kOk;
}

int compare_cmd(const std::string& path, const std::string& source, std::ostream& out) {
  const ModelDocument model = load_model_file(path);
  if (model.fmea_items.empty()) throw ValidationError("model '" + model.name + "' has no FMEA items");
  const auto judgments = model.judgments();
  const PipelineResult r = run_pipeline(model, judgments, {parse_weights_source(source)});
  const ComparisonReport& c = *r.comparison;

  print_weights(r, out);
  out << fmt::format("\n{:<32} {:>3} {:>3} {:>3} {:>11} {:>12} {:>12} {:>13} {:>5}\n", "cause", "S", "O",
                     "D", "rpn_classic", "rpn_weighted", "rank_classic", "rank_weighted", "shift");
  for (std::size_t i = 0; i < c.rows.size(); ++i) {
    const ComparisonRow& row = c.rows[i];
    const FmeaItem& item = r.records[i].item;
    out << fmt::format("{:<32} {:>3} {:>3} {:>3} {:>11.0f} {:>12.4f} {:>12} {:>13} {:>+5}\n", row.cause,
                       item.s, item.o, item.d, row.rpn_classic, row.rpn_weighted, row.rank_classic,
                       row.rank_weighted, row.rank_shift);
  }
  auto ties = [](const std::map<int, int>& m) {
    if (m.empty()) return std::string("none");
    std::string s;
    for (auto [rank, size] : m) s += fmt::format("{}rank {} x{}", s.empty() ? "" : ", ", rank, size);
    return s;
  };
  out << fmt::format("\nclassic ties: {} ({} groups)\n", ties(c.classic_ties), c.classic_ties.size());
  out << fmt::format("weighted ties: {} ({} groups)\n", ties(c.weighted_ties), c.weighted_ties.size());
  out << fmt::format("weighted above classic: {} of {}; below: {}\n", c.weighted_above_classic,
                     c.rows.size(), c.weighted_below_classic);
  out << fmt::format("spearman rank correlation: {:.4f}\n", c.spearman);
  out << "largest shifts:";
  for (const ComparisonRow& row : largest_shifts(c, 3))
    out << fmt::format(" {} {}->{} ({:+})", row.cause, row.rank_classic, row.rank_weighted, row.rank_shift);
  out << '\n';
  return kOk;
}

int serve(const std::string& address, const std::string& store, const std::string& cors,
          std::ostream& out) {
  const auto [host, port] = parse_address(address);
  SessionService service({store, cors});
  HttpServer server(service);

  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  server.bind(host, port);
  out << fmt::format("listening on http://{}:{} (store {})", host, server.port(), store) << std::endl;
  std::thread worker([&server] { server.run(); });
  int received = 0;
  sigwait(&signals, &received);
  server.stop();
  worker.join();
  out << "shutdown" << std::endl;
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"ANP-FMEA risk prioritization engine", "riskweave"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "riskweave 0.1.0");

  std::string model_path, source = "computed", out_dir = ".";
  std::string address = "127.0.0.1:8080", store = "riskweave-store", cors = "*";
  bool strict = false, notes = false;

  auto* v = app.add_subcommand("validate", "Consistency table for every comparison matrix");
  v->add_option("model", model_path, "model.json")->required();
  v->add_flag("--strict", strict, "Exit 1 when any CR exceeds 0.1 or a judgment is missing");
  v->add_flag("--notes", notes, "List the manifest's interpretation notes");

  auto* s = app.add_subcommand("solve", "Run the full pipeline and write CSV outputs");
  s->add_option("model", model_path, "model.json")->required();
  s->add_option("--weights-source", source, "computed | paper")->check(CLI::IsMember({"computed", "paper"}));
  s->add_option("--out", out_dir, "Output directory");

  auto* c = app.add_subcommand("compare", "Classic FMEA vs weighted RPN ranking");
  c->add_option("model", model_path, "model.json")->required();
  c->add_option("--weights-source", source, "computed | paper")->check(CLI::IsMember({"computed", "paper"}));

  auto* sv = app.add_subcommand("serve", "Run the HTTP service");
  sv->add_option("--addr", address, "Listen address host:port")->envname("RISKWEAVE_ADDR");
  sv->add_option("--store", store, "Session store root")->envname("RISKWEAVE_STORE");
  sv->add_option("--cors-origin", cors, "Access-Control-Allow-Origin value")->envname("RISKWEAVE_CORS_ORIGIN");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (*v) return validate(model_path, strict, notes, out, err);
    if (*s) return solve(model_path, source, out_dir, out);
    if (*c) return compare_cmd(model_path, source, out);
    if (*sv) return serve(address, store, cors, out);
  } catch (const IncompleteJudgmentsError& e) {
    err << "error: " << e.what() << '\n';
    for (const MissingPair& m : e.missing())
      err << fmt::format("  missing: {} [{} / {}]\n", m.context, m.row, m.col);
    return kValidation;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code(e);
  }
  return kValidation;
}

}  // namespace riskweave::cli
