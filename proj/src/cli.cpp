#include "reqont/cli.hpp"

#include "reqont/agreement.hpp"
#include "reqont/api.hpp"
#include "reqont/json_util.hpp"
#include "reqont/repository.hpp"
#include "reqont/service.hpp"

#include <CLI11.hpp>

#include <csignal>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <pthread.h>

namespace reqont {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Common {
  std::string repo;
  std::string format = "text";

  bool as_json() const { return format == "json"; }
};

std::string default_repo() {
  const char* env = std::getenv("REQONT_REPO");
  return env && *env ? env : ".";
}

void emit(std::ostream& out, const json& payload) { out << json_util::canonical_dump(payload); }

LoadedRepository open_repository(const Common& common) {
  return load_repository(RepositoryLayout::at(common.repo));
}

int cmd_validate(const Common& common, std::ostream& out) {
  const LoadedRepository repo = open_repository(common);
  if (common.as_json()) {
    emit(out, api::validation(repo));
  } else {
    out << to_text(repo.report);
    if (!repo.quarantined.empty()) {
      out << "quarantined references:";
      for (const auto& key : repo.quarantined) out << ' ' << key;
      out << '\n';
    }
  }
  return repo.report.ok() ? kExitOk : kExitDomain;
}

int cmd_stats(const Common& common, std::ostream& out) {
  const LoadedRepository repo = open_repository(common);
  if (common.as_json()) {
    emit(out, api::stats(*repo.snapshot));
  } else {
    out << to_text(summary_stats(*repo.snapshot));
  }
  return kExitOk;
}

int cmd_query(const Common& common, const api::Params& params, std::ostream& out) {
  const LoadedRepository repo = open_repository(common);
  const api::Listing listing = api::factors(*repo.snapshot, api::parse_filter(params), api::parse_page(params));
  if (common.as_json()) {
    emit(out, listing.items);
  } else {
    for (const auto& item : listing.items) out << item.at("name").get<std::string>() << '\n';
  }
  return kExitOk;
}

int cmd_gaps(const Common& common, std::ostream& out) {
  const LoadedRepository repo = open_repository(common);
  if (common.as_json()) {
    emit(out, api::gaps(*repo.snapshot));
  } else {
    out << to_text(gap_report(*repo.snapshot));
  }
  return kExitOk;
}

int cmd_authors(const Common& common, std::ostream& out) {
  const LoadedRepository repo = open_repository(common);
  if (common.as_json()) {
    emit(out, api::authors(*repo.snapshot));
  } else {
    out << to_text(author_index(*repo.snapshot));
  }
  return kExitOk;
}

struct AgreementArgs {
  std::string dir_a;
  std::string dir_b;
  std::string structure;
  std::string id_a = "A";
  std::string id_b = "B";
};

int cmd_agreement(const Common& common, const AgreementArgs& args, std::ostream& out, std::ostream& err) {
  const fs::path structure = args.structure.empty() ? fs::path(common.repo) / "structure.json" : fs::path(args.structure);
  const TaxonomySchema schema = parse_structure(read_file(structure));
  for (const auto& dir : {args.dir_a, args.dir_b}) {
    if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir);
  }
  const LoadedExtractions a = load_extractions(args.dir_a, schema);
  const LoadedExtractions b = load_extractions(args.dir_b, schema);
  if (!a.findings.empty() || !b.findings.empty()) {
    for (const auto* findings : {&a.findings, &b.findings}) {
      for (const auto& f : *findings) err << f.code << ' ' << f.subject << ": " << f.message << '\n';
    }
    return kExitDomain;
  }
  const AgreementReport report = agreement_report(a.records, b.records, schema, {args.id_a, args.id_b});
  if (common.as_json()) {
    emit(out, to_json(report));
  } else {
    out << to_text(report);
  }
  return kExitOk;
}

int cmd_exit_check(const Common& common, std::ostream& out) {
  const LoadedRepository repo = open_repository(common);
  if (!repo.layout.iterations_file) throw IoError("no iterations.json in " + repo.layout.root.string());
  const EndingConditions conditions = check_ending_conditions(*repo.snapshot, repo.iterations, repo.manifest);
  if (common.as_json()) {
    json subjective = json::array();
    for (const auto& c : subjective_conditions()) subjective.push_back({{"name", c.name}, {"status", c.status}});
    emit(out, {{"ending_conditions", to_json(conditions)}, {"subjective_conditions", subjective}});
  } else {
    out << to_text(conditions);
    for (const auto& c : subjective_conditions()) out << c.name << ": " << c.status << '\n';
  }
  for (const auto& [name, result] : conditions) {
    if (result.verdict != Verdict::pass) return kExitDomain;
  }
  return kExitOk;
}

int cmd_fmt(const Common& common, bool check, std::ostream& out) {
  const RepositoryLayout layout = RepositoryLayout::at(common.repo);
  const std::string structure_raw = read_file(layout.structure_file);
  const TaxonomySchema schema = parse_structure(structure_raw);

  std::vector<std::pair<fs::path, std::string>> rewrites;
  if (const std::string canonical = serialize_structure(schema); canonical != structure_raw) {
    rewrites.emplace_back(layout.structure_file, canonical);
  }
  for (const auto& file : extraction_files(layout.extractions_dir)) {
    const std::string raw = read_file(file);
    std::string canonical;
    try {
      canonical = canonical_serialize(parse_extraction(raw, schema));
    } catch (const ParseError& e) {
      throw ParseError(file.filename().string() + ": " + e.location(), e.message());
    } catch (const FieldError& e) {
      throw FieldError(e.code(), file.filename().string() + ":" + e.path(), e.what());
    }
    if (canonical != raw) rewrites.emplace_back(file, canonical);
  }

  for (const auto& [file, content] : rewrites) {
    const std::string name = fs::relative(file, layout.root).string();
    if (check) {
      out << "not canonical: " << name << '\n';
    } else {
      write_file(file, content);
      out << "formatted: " << name << '\n';
    }
  }
  return check && !rewrites.empty() ? kExitDomain : kExitOk;
}

int cmd_serve(const Common& common, int port, const std::string& bind, const std::string& reload, std::ostream& out) {
  // Block the signals before any thread exists so only sigwait sees them.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  sigaddset(&signals, SIGHUP);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  ServiceConfig config;
  config.repository_root = common.repo;
  config.port = port;
  config.bind_address = bind;
  config.reload = reload == "on-signal" ? ReloadMode::on_signal : ReloadMode::manual;
  Service service(config);
  const auto snapshot = service.current();
  if (!snapshot->repo->report.ok()) {
    out << "warning: repository has violations, see /api/v1/validation\n";
  }
  const int bound = service.start();
  out << "serving " << common.repo << " on http://" << bind << ':' << bound << "/api/v1\n" << std::flush;

  for (;;) {
    int sig = 0;
    if (sigwait(&signals, &sig) != 0) break;
    if (sig == SIGHUP) {
      if (config.reload != ReloadMode::on_signal) continue;
      const bool ok = service.reload();
      out << (ok ? "reloaded, snapshot version " + std::to_string(service.current()->version)
                 : std::string("reload failed, keeping previous snapshot"))
          << '\n'
          << std::flush;
      continue;
    }
    break;
  }
  service.stop();
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Requirements quality factor ontology repository", "reqont"};
  app.require_subcommand(1);

  Common common;
  common.repo = default_repo();
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--repo", common.repo, "Repository root (default: $REQONT_REPO or .)");
    sub->add_option("--format", common.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  };

  auto* validate = app.add_subcommand("validate", "Validate structure and extractions");
  auto* stats = app.add_subcommand("stats", "Corpus statistics");
  auto* query = app.add_subcommand("query", "Find factors");
  auto* gaps = app.add_subcommand("gaps", "Research gaps");
  auto* authors = app.add_subcommand("authors", "Author index");
  auto* agreement = app.add_subcommand("agreement", "Agreement between two extraction sets");
  auto* exit_check = app.add_subcommand("exit-check", "Evaluate ending conditions");
  auto* fmt = app.add_subcommand("fmt", "Rewrite files in canonical form");
  auto* serve = app.add_subcommand("serve", "Serve the JSON API");
  for (auto* sub : {validate, stats, query, gaps, authors, agreement, exit_check, fmt, serve}) add_common(sub);

  // Query flags use the HTTP parameter names so both go through parse_filter.
  std::map<std::string, std::string> query_values;
  for (const char* name : {"scope", "aspect", "text_query", "has_approach", "has_dataset", "accessibility", "evidence",
                           "practitioners", "limit", "offset"}) {
    std::string flag = std::string("--") + name;
    for (auto& c : flag) {
      if (c == '_') c = '-';
    }
    query->add_option_function<std::string>(
        flag, [&query_values, name](const std::string& v) { query_values[name] = v; }, name);
  }

  AgreementArgs agreement_args;
  agreement->add_option("--a", agreement_args.dir_a, "First extraction directory")->required();
  agreement->add_option("--b", agreement_args.dir_b, "Second extraction directory")->required();
  agreement->add_option("--structure", agreement_args.structure, "Structure file (default: <repo>/structure.json)");
  agreement->add_option("--id-a", agreement_args.id_a, "Label of the first extractor");
  agreement->add_option("--id-b", agreement_args.id_b, "Label of the second extractor");

  bool check = false;
  fmt->add_flag("--check", check, "Report non-canonical files without writing");

  int port = 8080;
  std::string bind = "127.0.0.1";
  std::string reload = "manual";
  serve->add_option("--port", port, "Port")->check(CLI::Range(1, 65535));
  serve->add_option("--bind", bind, "Bind address");
  serve->add_option("--reload", reload, "Reload mode")->check(CLI::IsMember({"manual", "on-signal"}));

  std::vector<const char*> argv{"reqont"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*validate) return cmd_validate(common, out);
    if (*stats) return cmd_stats(common, out);
    if (*query) return cmd_query(common, api::Params(query_values.begin(), query_values.end()), out);
    if (*gaps) return cmd_gaps(common, out);
    if (*authors) return cmd_authors(common, out);
    if (*agreement) return cmd_agreement(common, agreement_args, out, err);
    if (*exit_check) return cmd_exit_check(common, out);
    if (*fmt) return cmd_fmt(common, check, out);
    if (*serve) return cmd_serve(common, port, bind, reload, out);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const api::BadRequest& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    if (common.as_json()) {
      emit(err, api::error_body(e.code(), e.what()));
    } else {
      err << "error: " << e.what() << '\n';
    }
    return kExitDomain;
  }
  return kExitUsage;
}

}  // namespace reqont
