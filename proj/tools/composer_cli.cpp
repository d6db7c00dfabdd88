// Licensed under the Apache 2.0 license. See LICENSE in the project root.
//
// composer: QoS-aware semantic service composition.
//
//   compose  run the full pipeline on a registry and a request
//   gen      generate a seeded random dataset
//   verify   re-validate a solution document independently
//   bench    run compose over a directory of datasets and tabulate
//
// Exit codes: 0 ok, 1 I/O or parse error, 2 no solution, 3 timed out
// without a solution, 4 verification failed.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "composer/dataset.hpp"
#include "composer/error.hpp"
#include "composer/oracle.hpp"
#include "composer/prune.hpp"
#include "composer/search.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace composer;

namespace {

ordered_json prune_report_to_json(const PruneReport& report) {
  ordered_json doc;
  doc["servicesBefore"] = report.services_before;
  doc["servicesAfter"] = report.services_after;
  doc["seconds"] = report.seconds;
  doc["passes"] = ordered_json::array();
  for (const auto& p : report.passes) {
    ordered_json e;
    e["pass"] = p.pass;
    e["servicesBefore"] = p.services_before;
    e["servicesAfter"] = p.services_after;
    e["inputsRemoved"] = p.inputs_removed;
    e["outputsRemoved"] = p.outputs_removed;
    if (p.pass == "equivalence") e["merges"] = p.merges;
    e["seconds"] = p.seconds;
    doc["passes"].push_back(std::move(e));
  }
  return doc;
}

struct PipelineOptions {
  Criterion criterion = Criterion::ResponseTime;
  bool criterion_set = false;
  double timeout_secs = 0;  // 0: take from request, default 300
  std::string search = "hybrid";
  std::string match_policy;  // empty: take from request
  bool no_prune = false;
  int threads = 0;
  bool serial = false;
};

struct PipelineResult {
  SolutionRecord best;
  std::optional<SolutionRecord> local;
  SearchStatus global_status = SearchStatus::Exhausted;
  PruneReport prune;
  int graph_services = 0;
  int graph_services_opt = 0;
  Qos optimal = 0;
};

// Request with command-line overrides folded in.
Request effective_request(Request request, const PipelineOptions& opt) {
  if (opt.criterion_set) request.criterion = opt.criterion;
  if (!opt.match_policy.empty())
    request.policy = opt.match_policy == "paper" ? MatchPolicy::with_subsume()
                                                 : MatchPolicy::exact_plugin();
  return request;
}

// Full pipeline: load -> build -> prune -> search. Throws NoSolutionError /
// Error; returns nullopt when the search timed out without any solution.
std::optional<PipelineResult> run_pipeline(const Registry& registry, Request raw,
                                           const PipelineOptions& opt) {
  Request request = effective_request(raw, opt);
  double timeout = opt.timeout_secs > 0 ? opt.timeout_secs
                                        : request.timeout_secs.value_or(300.0);
  require_criterion(registry, request.criterion);
  const QosAlgebra algebra = QosAlgebra::for_criterion(request.criterion);
  ParallelConfig par{opt.threads, opt.serial};

  PipelineResult result;
  MatchGraph graph = build_match_graph(registry, request, par);
  result.graph_services = graph.service_count();

  MatchGraph pruned = opt.no_prune ? graph
                                   : optimize_pipeline(graph, algebra, &result.prune, par);
  result.graph_services_opt = pruned.service_count();
  result.optimal = graph_optimal_qos(pruned, algebra);
  if (result.optimal == algebra.zero)
    throw NoSolutionError("no solution with finite QoS", {});

  Deadline deadline = Deadline::after(timeout);
  if (opt.search == "local") {
    SearchOutcome out = local_search(pruned, algebra, deadline);
    if (out.status != SearchStatus::Found) return std::nullopt;
    result.best = *out.record;
    result.local = *out.record;
  } else if (opt.search == "global") {
    SearchOutcome out = global_search(pruned, algebra, deadline);
    if (out.status != SearchStatus::Found) return std::nullopt;
    result.best = *out.record;
  } else {
    HybridResult out = hybrid_search(pruned, algebra, deadline);
    if (!out.best) return std::nullopt;
    result.best = *out.best;
    result.local = out.local;
    result.global_status = out.global_status;
  }
  return result;
}

ordered_json solution_to_json(const PipelineResult& r, const Request& request) {
  ordered_json doc = composition_to_json(r.best.composition);
  ordered_json out;
  out["criterion"] = to_string(request.criterion);
  out["matchPolicy"] = request.policy.allow_subsume ? "paper" : "exact-plugin";
  out["totalQos"] = qos_to_json(r.best.total_qos);
  out["serviceCount"] = r.best.services;
  out["method"] = to_string(r.best.method);
  out["elapsed"] = r.best.elapsed_secs;
  out["services"] = doc["services"];
  out["matches"] = doc["matches"];
  out["pruneReport"] = prune_report_to_json(r.prune);
  return out;
}

void print_solution_table(const PipelineResult& r, Criterion criterion,
                          std::ostream& os) {
  os << "criterion     " << to_string(criterion) << "\n"
     << "totalQos      " << r.best.total_qos << "\n"
     << "serviceCount  " << r.best.services << "\n"
     << "method        " << to_string(r.best.method) << "\n"
     << "graphServices " << r.graph_services << " -> " << r.graph_services_opt
     << " after pruning\n"
     << "services\n";
  for (const auto& s : r.best.composition.services) {
    os << "  " << s.id << " (" << s.qos << ")";
    if (s.members.size() > 1) {
      os << " [";
      for (std::size_t i = 0; i < s.members.size(); ++i)
        os << (i ? ", " : "") << s.members[i];
      os << "]";
    }
    os << "\n";
  }
  os << "matches\n";
  for (const auto& m : r.best.composition.matches)
    os << "  " << m.from_service << "/" << m.output << " -> " << m.to_service << "/"
       << m.input << "\n";
}

int cmd_compose(const std::string& registry_path, const std::string& request_path,
                const PipelineOptions& opt, const std::string& format) {
  Registry registry = load_registry_file(registry_path);
  Request request =
      effective_request(load_request_file(request_path, registry), opt);

  try {
    auto result = run_pipeline(registry, request, opt);
    if (!result) {
      std::cerr << "composer: timed out without a solution\n";
      return 3;
    }
    if (format == "table")
      print_solution_table(*result, request.criterion, std::cout);
    else
      std::cout << solution_to_json(*result, request).dump(2) << "\n";
    return 0;
  } catch (const NoSolutionError& e) {
    std::cerr << "composer: " << e.what() << "\n";
    return 2;
  }
}

int cmd_verify(const std::string& registry_path, const std::string& request_path,
               const std::string& solution_path) {
  Registry registry = load_registry_file(registry_path);
  Request request = load_request_file(request_path, registry);

  std::ifstream in(solution_path);
  if (!in) throw ParseError("cannot open '" + solution_path + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("'" + solution_path + "': " + e.what());
  }

  Criterion criterion = request.criterion;
  if (doc.contains("criterion")) {
    auto c = criterion_from_string(doc["criterion"].get<std::string>());
    if (c) criterion = *c;
  }
  if (doc.contains("matchPolicy"))
    request.policy = doc["matchPolicy"] == "paper" ? MatchPolicy::with_subsume()
                                                   : MatchPolicy::exact_plugin();
  const QosAlgebra algebra = QosAlgebra::for_criterion(criterion);
  Composition comp = composition_from_json(doc);
  ValidationReport report = validate_composition(registry, request, comp, algebra);

  std::vector<std::string> complaints = report.violations;
  if (report.ok()) {
    if (doc.contains("totalQos") &&
        qos_from_json(doc["totalQos"]) != report.recomputed_total) {
      std::ostringstream msg;
      msg << "claimed totalQos " << qos_from_json(doc["totalQos"])
          << " but recomputed " << report.recomputed_total;
      complaints.push_back(msg.str());
    }
    if (doc.contains("serviceCount") &&
        doc["serviceCount"].get<int>() != report.recomputed_count)
      complaints.push_back("claimed serviceCount " +
                           std::to_string(doc["serviceCount"].get<int>()) +
                           " but recomputed " + std::to_string(report.recomputed_count));
  }

  ordered_json out;
  out["valid"] = complaints.empty();
  out["violations"] = complaints;
  out["recomputedTotalQos"] = qos_to_json(report.recomputed_total);
  out["recomputedServiceCount"] = report.recomputed_count;
  std::cout << out.dump(2) << "\n";
  return complaints.empty() ? 0 : 4;
}

int cmd_gen(const GeneratorParams& params, const std::string& out_dir,
            const std::string& name) {
  GeneratedDataset ds = generate_dataset(params);
  fs::create_directories(out_dir);
  const std::string base = (fs::path(out_dir) / name).string();
  std::ofstream reg(base + ".registry.json");
  std::ofstream req(base + ".request.json");
  if (!reg || !req) throw Error("cannot write dataset files under '" + out_dir + "'");
  reg << ds.registry_doc.dump(2) << "\n";
  req << ds.request_doc.dump(2) << "\n";
  std::cerr << "wrote " << base << ".registry.json and " << base << ".request.json\n";
  return 0;
}

struct BenchRow {
  std::string dataset;
  Criterion criterion = Criterion::ResponseTime;
  bool solved = false;
  Qos optimal = 0;
  int graph_services = 0;
  int graph_services_opt = 0;
  std::optional<std::pair<int, double>> local;   // services, seconds
  std::optional<std::pair<int, double>> global;  // "-" when absent
  PruneReport prune;
};

ordered_json bench_rows_to_json(const std::vector<BenchRow>& rows) {
  ordered_json arr = ordered_json::array();
  for (const auto& r : rows) {
    ordered_json e;
    e["dataset"] = r.dataset;
    e["criterion"] = to_string(r.criterion);
    if (!r.solved) {
      e["status"] = "noSolution";
      arr.push_back(std::move(e));
      continue;
    }
    e["optimalQos"] = qos_to_json(r.optimal);
    e["graphServices"] = r.graph_services;
    e["graphServicesOpt"] = r.graph_services_opt;
    if (r.local)
      e["local"] = {{"services", r.local->first}, {"seconds", r.local->second}};
    else
      e["local"] = "-";
    if (r.global)
      e["global"] = {{"services", r.global->first}, {"seconds", r.global->second}};
    else
      e["global"] = "-";
    e["pruneReport"] = prune_report_to_json(r.prune);
    arr.push_back(std::move(e));
  }
  return arr;
}

void print_bench_table(const std::vector<BenchRow>& rows, std::ostream& os) {
  os << std::left << std::setw(20) << "dataset" << std::setw(14) << "criterion"
     << std::right << std::setw(12) << "optimalQos" << std::setw(10) << "graph"
     << std::setw(10) << "opt" << std::setw(10) << "local" << std::setw(10)
     << "l.time" << std::setw(10) << "global" << std::setw(10) << "g.time" << "\n";
  for (const auto& r : rows) {
    os << std::left << std::setw(20) << r.dataset << std::setw(14)
       << to_string(r.criterion) << std::right;
    if (!r.solved) {
      os << std::setw(12) << "noSolution" << "\n";
      continue;
    }
    std::ostringstream optimal;
    if (r.optimal == static_cast<Qos>(static_cast<std::int64_t>(r.optimal)))
      optimal << static_cast<std::int64_t>(r.optimal);
    else
      optimal << r.optimal;
    os << std::setw(12) << optimal.str() << std::setw(10) << r.graph_services
       << std::setw(10) << r.graph_services_opt;
    if (r.local)
      os << std::setw(10) << r.local->first << std::setw(10) << std::fixed
         << std::setprecision(3) << r.local->second;
    else
      os << std::setw(10) << "-" << std::setw(10) << "-";
    if (r.global)
      os << std::setw(10) << r.global->first << std::setw(10) << std::fixed
         << std::setprecision(3) << r.global->second;
    else
      os << std::setw(10) << "-" << std::setw(10) << "-";
    os << "\n";
    os.unsetf(std::ios::fixed);
  }
}

int cmd_bench(const std::string& dir, const std::vector<std::string>& criteria,
              const PipelineOptions& base_opt, const std::string& format) {
  std::vector<std::string> stems;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    const std::string suffix = ".registry.json";
    if (name.size() > suffix.size() &&
        name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0)
      stems.push_back(name.substr(0, name.size() - suffix.size()));
  }
  std::sort(stems.begin(), stems.end());
  if (stems.empty()) throw Error("no *.registry.json files under '" + dir + "'");

  std::vector<BenchRow> rows;
  for (const std::string& stem : stems) {
    const std::string reg_path = (fs::path(dir) / (stem + ".registry.json")).string();
    const std::string req_path = (fs::path(dir) / (stem + ".request.json")).string();
    Registry registry = load_registry_file(reg_path);
    Request request = load_request_file(req_path, registry);

    for (const std::string& cname : criteria) {
      auto crit = criterion_from_string(cname);
      if (!crit) throw Error("unknown criterion '" + cname + "'");
      PipelineOptions opt = base_opt;
      opt.criterion = *crit;
      opt.criterion_set = true;
      opt.search = "hybrid";

      BenchRow row;
      row.dataset = stem;
      row.criterion = *crit;
      try {
        Request req = effective_request(request, opt);
        req.criterion = *crit;
        require_criterion(registry, req.criterion);
        const QosAlgebra algebra = QosAlgebra::for_criterion(req.criterion);
        ParallelConfig par{opt.threads, opt.serial};

        MatchGraph graph = build_match_graph(registry, req, par);
        row.graph_services = graph.service_count();
        MatchGraph pruned =
            opt.no_prune ? graph : optimize_pipeline(graph, algebra, &row.prune, par);
        row.graph_services_opt = pruned.service_count();
        row.optimal = graph_optimal_qos(pruned, algebra);
        row.solved = true;

        // local runs to completion; the time budget is the global phase's
        SearchOutcome local = local_search(pruned, algebra);
        if (local.record)
          row.local = {{local.record->services, local.record->elapsed_secs}};
        const double budget =
            opt.timeout_secs > 0 ? opt.timeout_secs : req.timeout_secs.value_or(300.0);
        SearchOutcome global =
            global_search(pruned, algebra, Deadline::after(budget),
                          local.record ? &*local.record : nullptr);
        if (global.status == SearchStatus::Found ||
            global.status == SearchStatus::IncumbentOptimal)
          row.global = {{global.record->services, global.record->elapsed_secs}};
      } catch (const NoSolutionError&) {
        row.solved = false;
      }
      rows.push_back(std::move(row));
    }
  }

  if (format == "table")
    print_bench_table(rows, std::cout);
  else
    std::cout << bench_rows_to_json(rows).dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"QoS-aware semantic service composition"};
  app.require_subcommand(1);

  PipelineOptions opt;
  std::string criterion_name;

  auto add_pipeline_flags = [&](CLI::App* cmd) {
    cmd->add_option("--criterion", criterion_name, "responseTime|throughput");
    cmd->add_option("--timeout-secs", opt.timeout_secs, "search budget (default 300)");
    cmd->add_option("--match-policy", opt.match_policy, "exact-plugin|paper")
        ->check(CLI::IsMember({"exact-plugin", "paper"}));
    cmd->add_flag("--no-prune", opt.no_prune, "skip the optimization pipeline");
    cmd->add_option("--threads", opt.threads, "kernel threads (0 = auto)");
    cmd->add_flag("--serial", opt.serial, "force serial kernels");
  };

  std::string registry_path, request_path, solution_path;
  std::string compose_format = "json";
  auto* compose = app.add_subcommand("compose", "solve one composition request");
  compose->add_option("registry", registry_path, "registry document")->required();
  compose->add_option("request", request_path, "request document")->required();
  add_pipeline_flags(compose);
  compose->add_option("--search", opt.search, "hybrid|local|global")
      ->check(CLI::IsMember({"hybrid", "local", "global"}));
  compose->add_option("--format", compose_format, "json|table")
      ->check(CLI::IsMember({"json", "table"}));

  auto* verify = app.add_subcommand("verify", "re-validate a solution document");
  verify->add_option("registry", registry_path)->required();
  verify->add_option("request", request_path)->required();
  verify->add_option("solution", solution_path)->required();

  GeneratorParams params;
  std::string out_dir = ".", name = "dataset";
  auto* gen = app.add_subcommand("gen", "generate a seeded random dataset");
  gen->add_option("--seed", params.seed, "PRNG seed");
  gen->add_option("--services", params.num_services, "number of services");
  gen->add_option("--concepts", params.num_concepts,
                  "number of concepts (default 3x services)");
  gen->add_option("--depth", params.ontology_depth, "ontology depth");
  gen->add_option("--inputs-min", params.inputs_per_service.first);
  gen->add_option("--inputs-max", params.inputs_per_service.second);
  gen->add_option("--outputs-min", params.outputs_per_service.first);
  gen->add_option("--outputs-max", params.outputs_per_service.second);
  bool solvable_flag = false, unsolvable_flag = false;
  gen->add_flag("--solvable", solvable_flag, "plant a known solution path (default)");
  gen->add_flag("--no-solvable", unsolvable_flag, "do not plant a solution path");
  gen->add_option("--out", out_dir, "output directory");
  gen->add_option("--name", name, "dataset file stem");

  std::string bench_dir, format = "json";
  std::vector<std::string> criteria{"responseTime", "throughput"};
  auto* bench = app.add_subcommand("bench", "run over a dataset directory");
  bench->add_option("dir", bench_dir, "directory of *.registry.json/*.request.json")
      ->required();
  bench->add_option("--criteria", criteria, "criteria to run");
  bench->add_option("--format", format, "json|table")
      ->check(CLI::IsMember({"json", "table"}));
  add_pipeline_flags(bench);

  CLI11_PARSE(app, argc, argv);

  try {
    if (!criterion_name.empty()) {
      auto c = criterion_from_string(criterion_name);
      if (!c) throw Error("unknown criterion '" + criterion_name + "'");
      opt.criterion = *c;
      opt.criterion_set = true;
    }
    if (compose->parsed())
      return cmd_compose(registry_path, request_path, opt, compose_format);
    if (verify->parsed()) return cmd_verify(registry_path, request_path, solution_path);
    if (gen->parsed()) {
      bool concepts_given = gen->count("--concepts") > 0;
      if (!concepts_given) params.num_concepts = params.num_services * 3;
      params.solvable = !unsolvable_flag;
      return cmd_gen(params, out_dir, name);
    }
    if (bench->parsed()) return cmd_bench(bench_dir, criteria, opt, format);
  } catch (const ParseError& e) {
    std::cerr << "composer: " << e.what() << "\n";
    return 1;
  } catch (const NoSolutionError& e) {
    std::cerr << "composer: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "composer: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "composer: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
