// Licensed under the Apache 2.0 license. See LICENSE in the project root.
//
// Acceptance suite: one line per criterion, PASS or FAIL, exit status 1 if
// anything failed. Criterion 7 is conditional on converted WSC datasets
// being present under datasets/wsc and is skipped (not failed) otherwise.

#include <chrono>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <vector>

#include <sys/resource.h>

#include "composer/dataset.hpp"
#include "composer/error.hpp"
#include "composer/oracle.hpp"
#include "composer/prune.hpp"
#include "composer/search.hpp"

using namespace composer;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

int failures = 0;

void report(int criterion, bool ok, const std::string& what) {
  std::cout << (ok ? "PASS" : "FAIL") << " criterion " << criterion << ": " << what
            << "\n";
  if (!ok) ++failures;
}

void skip(int criterion, const std::string& why) {
  std::cout << "SKIP criterion " << criterion << ": " << why << "\n";
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int input_by_name(const MatchGraph& g, const std::string& name) {
  for (std::size_t i = 0; i < g.inputs.size(); ++i)
    if (g.input_name(static_cast<int>(i)) == name) return static_cast<int>(i);
  return -1;
}

bool has_service(const MatchGraph& g, const std::string& id) {
  for (int s = 2; s < static_cast<int>(g.services.size()); ++s)
    if (g.service_name(s) == id) return true;
  return false;
}

std::string fixture(const std::string& name) {
  return std::string(COMPOSER_FIXTURE_DIR) + "/" + name;
}

// ---------------------------------------------------------------- corpus

struct CorpusInstance {
  Registry registry;
  Request request;
  std::uint64_t seed;
};

std::vector<CorpusInstance> build_corpus(int target) {
  std::vector<CorpusInstance> corpus;
  std::uint64_t seed = 1000;
  while (static_cast<int>(corpus.size()) < target && seed < 1000 + 10u * target) {
    GeneratorParams params;
    params.seed = seed++;
    if (seed % 2 == 0) {
      // sparse shape: few providers per concept
      params.num_services = 8 + static_cast<int>(seed % 5);
      params.num_concepts = 22 + static_cast<int>(seed % 9);
      params.inputs_per_service = {1, 2};
      params.outputs_per_service = {1, 2};
      params.response_time_range = {10, 200};
      params.throughput_range = {100, 5000};
    } else {
      // dense shape: heavy provider overlap and near-tied QoS, where the
      // local/global gap and the cycle checks actually bite
      params.num_services = 12 + static_cast<int>(seed % 5);
      params.num_concepts = 18 + static_cast<int>(seed % 7);
      params.inputs_per_service = {1, 3};
      params.outputs_per_service = {1, 3};
      params.response_time_range = {10, 30};
      params.throughput_range = {1000, 1200};
    }
    params.ontology_depth = 4;
    GeneratedDataset ds = generate_dataset(params);
    CorpusInstance inst{load_registry(ds.registry_doc), Request{}, params.seed};
    inst.request = load_request(ds.request_doc, inst.registry);
    // eligibility: at most 12 services after pruning under both criteria
    bool ok = true;
    try {
      MatchGraph g = build_match_graph(inst.registry, inst.request);
      for (Criterion crit : {Criterion::ResponseTime, Criterion::Throughput}) {
        MatchGraph pruned = optimize_pipeline(g, QosAlgebra::for_criterion(crit));
        ok = ok && pruned.service_count() <= 12 && g.service_count() <= 20;
      }
    } catch (const NoSolutionError&) {
      ok = false;
    }
    if (ok) corpus.push_back(std::move(inst));
  }
  return corpus;
}

// ------------------------------------------------------------- criteria

void criterion_1() {
  auto t0 = Clock::now();
  std::ostringstream msg;
  bool ok = true;
  try {
    Registry reg = load_registry_file(fixture("fraud_detection.registry.json"));
    Request req = load_request_file(fixture("fraud_detection.request.json"), reg);
    const QosAlgebra rt = QosAlgebra::response_time();

    MatchGraph g = build_match_graph(reg, req);
    QosLabels labels = compute_qos_labels(g, rt);
    MaxBoundTable bounds = compute_max_bounds(g, labels, rt);

    MatchGraph after2 = prune_suboptimal(g, labels, bounds, rt);
    const bool secure_removed = !has_service(after2, "SecurePaymentService");
    ok = ok && secure_removed;

    const int client_id = input_by_name(g, "PremiumGeolocService/ont4:ClientID");
    const bool bound_pair = client_id >= 0 && labels.input_qos[client_id] == 20 &&
                            bounds.reached[client_id] && bounds.value[client_id] == 160;
    ok = ok && bound_pair;

    MatchGraph pruned = optimize_pipeline(g, rt);
    SearchOutcome local = local_search(pruned, rt);
    SearchOutcome global = global_search(pruned, rt);
    ok = ok && local.status == SearchStatus::Found && local.record->total_qos == 410 &&
         local.record->services == 4;
    ok = ok && global.status == SearchStatus::Found && global.record->total_qos == 410 &&
         global.record->services == 4;

    // the global search state that selects the premium service carries the
    // same bound interval
    SearchOptions opts;
    opts.collect_bound_trace = true;
    SearchOutcome traced = global_search(pruned, rt, Deadline::never(), nullptr, opts);
    bool traced_pair = false;
    for (const auto& e : traced.bound_trace)
      if (e.input == "PremiumGeolocService/ont4:ClientID")
        traced_pair = traced_pair || (e.min == 20 && e.max == 160);
    ok = ok && traced_pair;

    const double elapsed = seconds_since(t0);
    ok = ok && elapsed < 1.0;
    msg << "worked example: 410 ms / 4 services via local and global, suboptimal "
           "payment provider pruned, client-id bounds [20,160] ("
        << elapsed << " s)";
  } catch (const std::exception& e) {
    ok = false;
    msg << "exception: " << e.what();
  }
  report(1, ok, msg.str());
}

void criteria_2_to_5(const std::vector<CorpusInstance>& corpus) {
  auto t0 = Clock::now();
  int oracle_checked = 0, oracle_bad = 0;
  int ab_bad = 0;
  int label_checked = 0, label_bad = 0, determinism_bad = 0;
  int hybrid_bad = 0, local_fail = 0;

  for (const CorpusInstance& inst : corpus) {
    for (Criterion crit : {Criterion::ResponseTime, Criterion::Throughput}) {
      Request req = inst.request;
      req.criterion = crit;
      const QosAlgebra algebra = QosAlgebra::for_criterion(crit);
      MatchGraph g = build_match_graph(inst.registry, req);
      MatchGraph pruned = optimize_pipeline(g, algebra);
      const Qos optimum = graph_optimal_qos(pruned, algebra);

      // criterion 2: oracle equivalence on the pruned graph
      OracleResult oracle = brute_force_min_composition(pruned, algebra, 25);
      SearchOutcome global = global_search(pruned, algebra);
      if (!oracle.feasible || global.status != SearchStatus::Found ||
          global.record->total_qos != oracle.optimal_qos ||
          global.record->services != oracle.min_services)
        ++oracle_bad;
      ++oracle_checked;

      // criterion 3: A/B with and without the pipeline
      SearchOutcome raw_global = global_search(g, algebra);
      if (raw_global.status != SearchStatus::Found ||
          raw_global.record->total_qos != oracle.optimal_qos ||
          raw_global.record->services != oracle.min_services)
        ++ab_bad;

      // criterion 4: per-input label optimality (post-build graph) and
      // determinism across reruns
      if (g.service_count() <= 12) {
        QosLabels labels = compute_qos_labels(g, algebra);
        std::vector<Qos> optima = oracle_input_optima(g, algebra);
        for (std::size_t i = 0; i < optima.size(); ++i)
          if (labels.input_qos[i] != optima[i]) {
            ++label_bad;
            break;
          }
        ++label_checked;
        for (int rerun = 0; rerun < 10; ++rerun) {
          QosLabels again = compute_qos_labels(g, algebra);
          if (again.input_qos != labels.input_qos ||
              again.service_qos != labels.service_qos) {
            ++determinism_bad;
            break;
          }
        }
      }

      // criterion 5: hybrid dominance and local completeness
      HybridResult hy = hybrid_search(pruned, algebra);
      if (!hy.local) ++local_fail;
      if (!hy.local || !hy.best || hy.best->services > hy.local->services ||
          hy.local->total_qos != optimum || hy.best->total_qos != optimum)
        ++hybrid_bad;
    }
  }

  const int n = static_cast<int>(corpus.size());
  std::ostringstream m2;
  m2 << "oracle equivalence on " << oracle_checked << " instance/criterion runs ("
     << n << " instances), " << oracle_bad << " mismatches ("
     << seconds_since(t0) << " s)";
  report(2, n >= 200 && oracle_bad == 0 && seconds_since(t0) < 120.0, m2.str());

  std::ostringstream m3;
  m3 << "prune A/B identical optima and counts, " << ab_bad << " mismatches";
  report(3, ab_bad == 0, m3.str());

  std::ostringstream m4;
  m4 << "per-input labels equal oracle optima on " << label_checked
     << " runs, deterministic over 10 reruns (" << label_bad << "/" << determinism_bad
     << " failures)";
  report(4, label_checked > 0 && label_bad == 0 && determinism_bad == 0, m4.str());

  std::ostringstream m5;
  m5 << "hybrid count <= local count at optimal QoS everywhere, local never failed ("
     << hybrid_bad << "/" << local_fail << " failures)";
  report(5, hybrid_bad == 0 && local_fail == 0, m5.str());
}

void criterion_6() {
  bool ok = true;
  std::uint64_t seed = 0xA15;
  for (Criterion crit : {Criterion::ResponseTime, Criterion::Throughput}) {
    const QosAlgebra algebra = QosAlgebra::for_criterion(crit);
    SplitMix64 rng(seed++);
    for (int round = 0; round < 10000 && ok; ++round) {
      const Qos a = static_cast<Qos>(rng.bounded_int(0, 1000000));
      const Qos b = static_cast<Qos>(rng.bounded_int(0, 1000000));
      const Qos c = static_cast<Qos>(rng.bounded_int(0, 1000000));
      ok = ok && algebra.aggregate(a, algebra.identity) == a;
      ok = ok && algebra.aggregate(algebra.identity, a) == a;
      ok = ok && algebra.aggregate(a, algebra.zero) == algebra.zero;
      ok = ok && algebra.aggregate(algebra.aggregate(a, b), c) ==
                     algebra.aggregate(a, algebra.aggregate(b, c));
      if (algebra.better_or_equal(a, b))
        ok = ok && algebra.better_or_equal(algebra.aggregate(a, c),
                                           algebra.aggregate(b, c));
      if (crit == Criterion::ResponseTime)
        ok = ok && algebra.subtract(algebra.aggregate(a, b), b) == a;
    }
  }
  report(6, ok,
         "algebra laws over 10^4 random triples per criterion: identity, zero, "
         "associativity, order-monotone aggregation, subtract-inverse (response time)");
}

void criterion_7() {
  const fs::path dir = fs::path(COMPOSER_SOURCE_DIR) / "datasets" / "wsc";
  struct Expected {
    const char* name;
    Qos rt;
    Qos th;
    int local_rt_max;
  };
  // optimal end-to-end values and the published local-search sizes
  const std::vector<Expected> expected = {{"D-01", 500, 15000, 5},
                                          {"D-02", 1690, 6000, 20},
                                          {"D-03", 760, 4000, 10},
                                          {"D-04", 1470, 4000, 40},
                                          {"D-05", 4070, 4000, 32}};
  bool any = false, ok = true;
  std::ostringstream msg;
  for (const auto& e : expected) {
    const fs::path reg_path = dir / (std::string(e.name) + ".registry.json");
    const fs::path req_path = dir / (std::string(e.name) + ".request.json");
    if (!fs::exists(reg_path) || !fs::exists(req_path)) continue;
    any = true;
    try {
      Registry reg = load_registry_file(reg_path.string());
      Request req = load_request_file(req_path.string(), reg);
      for (Criterion crit : {Criterion::ResponseTime, Criterion::Throughput}) {
        req.criterion = crit;
        const QosAlgebra algebra = QosAlgebra::for_criterion(crit);
        MatchGraph g = build_match_graph(reg, req);
        MatchGraph pruned = optimize_pipeline(g, algebra);
        const Qos opt = graph_optimal_qos(pruned, algebra);
        const Qos want = crit == Criterion::ResponseTime ? e.rt : e.th;
        if (opt != want) {
          ok = false;
          msg << e.name << " " << to_string(crit) << " optimal " << opt << " != "
              << want << "; ";
        }
        if (crit == Criterion::ResponseTime) {
          SearchOutcome local = local_search(pruned, algebra, Deadline::after(300));
          if (local.status != SearchStatus::Found ||
              local.record->services > e.local_rt_max) {
            ok = false;
            msg << e.name << " local size above published bound; ";
          }
        }
      }
    } catch (const std::exception& ex) {
      ok = false;
      msg << e.name << " exception: " << ex.what() << "; ";
    }
  }
  if (!any) {
    skip(7, "no converted WSC datasets under datasets/wsc (optional)");
    return;
  }
  report(7, ok, "WSC replication: " + (msg.str().empty() ? "all values match" : msg.str()));
}

void criterion_8() {
  auto t0 = Clock::now();
  std::ostringstream msg;
  bool ok = true;
  try {
    GeneratorParams params;
    params.seed = 11;
    params.num_services = 9000;
    params.num_concepts = 27000;
    GeneratedDataset ds = generate_dataset(params);
    Registry reg = load_registry(ds.registry_doc);
    Request req = load_request(ds.request_doc, reg);
    const QosAlgebra rt = QosAlgebra::response_time();

    MatchGraph g = build_match_graph(reg, req);
    MatchGraph pruned = optimize_pipeline(g, rt);
    SearchOutcome local = local_search(pruned, rt, Deadline::after(60));
    const double elapsed = seconds_since(t0);

    struct rusage ru;
    getrusage(RUSAGE_SELF, &ru);
    const double rss_gb = static_cast<double>(ru.ru_maxrss) / (1024.0 * 1024.0);

    ok = local.status == SearchStatus::Found && elapsed < 60.0 && rss_gb < 2.0;
    msg << "9000-service dataset: graph " << g.service_count() << " -> "
        << pruned.service_count() << " services, local search "
        << (local.record ? local.record->services : -1) << " services, " << elapsed
        << " s, " << rss_gb << " GB peak";
  } catch (const std::exception& e) {
    ok = false;
    msg << "exception: " << e.what();
  }
  report(8, ok, msg.str());
}

}  // namespace

int main() {
  criterion_1();
  std::vector<CorpusInstance> corpus = build_corpus(200);
  std::cout << "corpus: " << corpus.size() << " eligible instances\n";
  criteria_2_to_5(corpus);
  criterion_6();
  criterion_7();
  criterion_8();
  std::cout << (failures == 0 ? "ACCEPTANCE PASSED" : "ACCEPTANCE FAILED") << " ("
            << failures << " failing criteria)\n";
  return failures == 0 ? 0 : 1;
}
