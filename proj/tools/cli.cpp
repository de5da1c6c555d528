#include "cli.hpp"

#include <atomic>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "frobsplit/cover.hpp"
#include "frobsplit/equivariant.hpp"
#include "frobsplit/errors.hpp"
#include "frobsplit/hypertoric.hpp"
#include "frobsplit/json_io.hpp"
#include "frobsplit/rng.hpp"
#include "frobsplit/weyl.hpp"

namespace frobsplit::cli {

namespace {

const std::vector<std::string> kCommands = {"weyl-verify",  "cover-fiber",        "point-azumaya", "arrangement-report",
                                            "freeness-check", "hypertoric-azumaya", "suite"};

constexpr std::uint64_t kMaxFieldOrder = std::uint64_t{1} << 31;

using fq::Raw;
using weyl::PointTriple;

struct Task {
  std::string kind;
  json params;
  std::function<json(SplitMix64&)> fn;  // returns {"pass", "result", optional "witness"/"skipped"}
};

json outcome(bool pass, json result, json witness = nullptr) {
  json o{{"pass", pass}, {"result", std::move(result)}};
  if (!pass && !witness.is_null()) o["witness"] = std::move(witness);
  return o;
}

std::uint64_t order(std::int64_t p, int k) {
  std::uint64_t q = 1;
  for (int i = 0; i < k; ++i) {
    q *= static_cast<std::uint64_t>(p);
    if (q >= kMaxFieldOrder) return kMaxFieldOrder;
  }
  return q;
}

// A point of the cover over random (b, omega) in F_{p^ext}^n; all coordinates
// nonzero when requested.
PointTriple sample_point(std::int64_t p, int ext, int n, SplitMix64& rng, bool all_nonzero = false) {
  auto F = fq::make_field(p, ext);
  const std::uint64_t lo = all_nonzero ? 1 : 0;
  std::vector<Raw> b, w;
  for (int i = 0; i < n; ++i) {
    b.push_back(static_cast<Raw>(lo + rng.below(F->order() - lo)));
    w.push_back(static_cast<Raw>(lo + rng.below(F->order() - lo)));
  }
  auto fib = cover::fiber_over(F, b, w);
  return fib.triple(rng.below(fib.points.size()));
}

hypertoric::HypertoricData torus_example(const std::vector<std::vector<std::int64_t>>& B, int n, std::int64_t p,
                                         std::vector<std::int64_t> alpha, std::vector<std::int64_t> lambda) {
  auto torus = hypertoric::build_torus_data(linalg::IntMatrix::from_rows(B, static_cast<std::size_t>(n)), n);
  auto F = fq::make_field(p, 1);
  std::vector<Raw> lam;
  for (auto v : lambda) lam.push_back(F->from_int(v));
  return hypertoric::make_data(std::move(torus), std::move(alpha), F, std::move(lam));
}

hypertoric::HypertoricData diagonal(int n, std::int64_t p) {
  return torus_example({std::vector<std::int64_t>(static_cast<std::size_t>(n), 1)}, n, p, {1}, {1});
}

hypertoric::HypertoricData first_coordinate(int n, std::int64_t p) {
  std::vector<std::int64_t> row(static_cast<std::size_t>(n), 0);
  row[0] = 1;
  return torus_example({row}, n, p, {1}, {1});
}

// ---- individual checks ----

Task euler_relation_task(std::int64_t p, int n) {
  return {"euler_relation", {{"p", p}, {"n", n}}, [p, n](SplitMix64&) {
            const bool ok = cover::euler_relation_check(p, n);
            return outcome(ok, json::object(), json{{"p", p}, {"n", n}});
          }};
}

Task centrality_task(std::int64_t p, int n) {
  return {"centrality", {{"p", p}, {"n", n}}, [p, n](SplitMix64&) {
            auto F = fq::make_field(p, 1);
            json failures = json::array();
            for (int i = 0; i < n; ++i) {
              const auto x = weyl::WeylElement::x(F, n, i), d = weyl::WeylElement::d(F, n, i);
              const auto e = weyl::WeylElement::euler(F, n, i);
              const auto P = static_cast<unsigned>(p);
              if (!weyl::is_central(x.pow(P))) failures.push_back("x" + std::to_string(i + 1) + "^p");
              if (!weyl::is_central(d.pow(P))) failures.push_back("d" + std::to_string(i + 1) + "^p");
              if (!weyl::is_central(e.pow(P) - e)) failures.push_back("E" + std::to_string(i + 1) + "^p-E");
            }
            const bool ok = failures.empty();
            return outcome(ok, {{"non_central", failures}}, json{{"p", p}, {"n", n}, {"non_central", failures}});
          }};
}

json point_or_sample(const std::optional<json>& given, std::int64_t p, int ext, int n, SplitMix64& rng,
                     PointTriple& pt, bool all_nonzero = false) {
  pt = given ? io::point_from_json(*given) : sample_point(p, ext, n, rng, all_nonzero);
  return io::to_json(pt);
}

Task char_poly_task(std::int64_t p, int ext, int n, std::optional<json> given) {
  json params{{"p", p}, {"n", n}, {"ext", ext}};
  return {"char_poly", params, [=](SplitMix64& rng) {
            PointTriple pt;
            const auto pj = point_or_sample(given, p, ext, n, rng, pt);
            json blocks = json::array();
            bool ok = true;
            for (int k = 0; k < pt.n; ++k) {
              const auto r = weyl::euler_block_check(pt, k);
              ok = ok && r.pass();
              blocks.push_back(io::to_json(r));
            }
            return outcome(ok, {{"point", pj}, {"blocks", blocks}}, json{{"point", pj}, {"blocks", blocks}});
          }};
}

Task point_module_task(std::int64_t p, int ext, int n, std::optional<json> given) {
  json params{{"p", p}, {"n", n}, {"ext", ext}};
  return {"point_module", params, [=](SplitMix64& rng) {
            PointTriple pt;
            point_or_sample(given, p, ext, n, rng, pt);
            // every Artin-Schreier root choice over the same (b, omega)
            auto fib = cover::fiber_over(pt.field, pt.b, pt.omega_p);
            json failures = json::array();
            std::size_t dim = 0;
            for (std::size_t i = 0; i < fib.points.size(); ++i) {
              const auto de = weyl::d_eta_compute(fib.triple(i));
              dim = de.rep.dim;
              if (de.dim != de.rep.dim || de.joint_kernel_dim != 1)
                failures.push_back({{"point", io::to_json(fib.triple(i))},
                                    {"dim", de.dim},
                                    {"joint_kernel_dim", de.joint_kernel_dim}});
            }
            json result{{"fiber", io::to_json(fib)}, {"root_choices", fib.points.size()}, {"expected_dim", dim}};
            return outcome(failures.empty(), result, json{{"failures", failures}});
          }};
}

Task azumaya_point_task(std::int64_t p, int ext, int n, std::optional<json> given) {
  json params{{"p", p}, {"n", n}, {"ext", ext}};
  return {"azumaya_point", params, [=](SplitMix64& rng) {
            PointTriple pt;
            point_or_sample(given, p, ext, n, rng, pt);
            const auto cert = weyl::azumaya_point_check(pt);
            const auto j = io::to_json(cert);
            return outcome(cert.pass, j, j);
          }};
}

Task cover_fiber_task(std::int64_t p, int ext, int n, std::optional<json> given) {
  json params{{"p", p}, {"n", n}, {"ext", ext}};
  return {"cover_fiber", params, [=](SplitMix64& rng) {
            fq::FieldPtr F;
            std::vector<Raw> b, w;
            if (given) {
              F = fq::make_field(given->at("p").get<std::int64_t>(), given->value("k", 1));
              b = io::elements_from_json(given->at("b"), F);
              w = io::elements_from_json(given->at("omega_p"), F);
            } else {
              F = fq::make_field(p, ext);
              for (int i = 0; i < n; ++i) {
                b.push_back(static_cast<Raw>(rng.below(F->order())));
                w.push_back(static_cast<Raw>(rng.below(F->order())));
              }
            }
            const auto fib = cover::fiber_over(F, b, w);
            std::size_t expected = 1;
            for (std::size_t i = 0; i < b.size(); ++i) expected *= static_cast<std::size_t>(F->characteristic());
            const bool torsor = cover::is_torsor(fib);
            const auto cart = cover::cartesian_check(F, b, w);
            const bool ok = fib.points.size() == expected && torsor && cart.pass;
            json result{{"fiber", io::to_json(fib)},
                        {"size", fib.points.size()},
                        {"expected_size", expected},
                        {"torsor", torsor},
                        {"cartesian", io::to_json(cart, *fib.field)}};
            return outcome(ok, result, result);
          }};
}

Task arrangement_task(const json& data_json) {
  return {"arrangement", {{"data", data_json}}, [data_json](SplitMix64&) {
            const auto data = io::data_from_json(data_json);
            const auto cls = hypertoric::classify_arrangement(data);
            const auto poly = hypertoric::polytope_P(data);
            const auto circuits = hypertoric::circuits_and_walls(data);
            json cj = json::array();
            for (const auto& c : circuits) cj.push_back(io::to_json(c, *data.field));
            json result{{"data", io::to_json(data)},
                        {"arrangement", io::to_json(hypertoric::arrangement(data))},
                        {"classification", io::to_json(cls)},
                        {"circuits", cj},
                        {"polytope", io::to_json(poly)},
                        {"simple", cls.simple},
                        {"smooth", cls.smooth},
                        {"N", poly.N}};
            // internal consistency: smooth implies simple, every circuit has a normal
            const bool ok = (!cls.smooth || cls.simple) && poly.N_I.size() == circuits.size();
            return outcome(ok, result, result);
          }};
}

Task freeness_task(const json& data_json) {
  return {"freeness", {{"data", data_json}}, [data_json](SplitMix64&) {
            const auto data = io::data_from_json(data_json);
            const auto rep = hypertoric::freeness_report(data);
            // witnesses must lie on mu^{-1}(lambda), be semistable, and have an
            // infinite stabilizer; free implies finite stabilizers
            json bad = json::array();
            for (const auto& w : rep.witnesses)
              if (hypertoric::moment_K(data.torus, w) != data.lambda || !hypertoric::is_semistable(data, w) ||
                  hypertoric::stabilizer_dim(data, w) == 0)
                bad.push_back(io::to_json(w));
            const bool ok = bad.empty() && (!rep.free || rep.finite_stabilizers);
            json result{{"data", io::to_json(data)}, {"report", io::to_json(rep, *data.field)}};
            return outcome(ok, result, json{{"data", io::to_json(data)}, {"bad_witnesses", bad}});
          }};
}

Task polytope_regression_task(std::int64_t p) {
  return {"polytope_regression", {{"p", p}}, [p](SplitMix64&) {
            const int n = static_cast<int>(p) + 1;
            const auto data = torus_example({std::vector<std::int64_t>(static_cast<std::size_t>(n), 1)}, n, p, {1}, {0});
            const auto poly = hypertoric::polytope_P(data);
            const bool ok = poly.N == p + 1 && poly.exceeds_p;
            json result{{"data", io::to_json(data)}, {"polytope", io::to_json(poly)}};
            return outcome(ok, result, result);
          }};
}

Task invariant_dims_task(const json& data_json, int ext, std::optional<json> given) {
  return {"invariant_dims", {{"data", data_json}, {"ext", ext}}, [=](SplitMix64& rng) {
            const auto data = io::data_from_json(data_json);
            PointTriple pt;
            const auto pj = point_or_sample(given, data.field->characteristic(), ext, data.torus.n, rng, pt);
            const auto d = equivariant::kp_invariant_dims_compute(data, pt);
            json result = io::to_json(d);
            result["point"] = pj;
            return outcome(d.pass(), result, json{{"data", data_json}, {"point", pj}, {"dims", result}});
          }};
}

Task hypertoric_azumaya_task(const json& data_json, int ext, std::optional<json> given, std::string mode) {
  return {"hypertoric_azumaya", {{"data", data_json}, {"ext", ext}, {"closed_orbit_mode", mode}},
          [=](SplitMix64& rng) {
            const auto data = io::data_from_json(data_json);
            PointTriple pt;
            const auto pj = point_or_sample(given, data.field->characteristic(), ext, data.torus.n, rng, pt, true);
            const auto m = mode == "asserted" ? equivariant::ClosedOrbitMode::asserted
                                              : equivariant::ClosedOrbitMode::one_ps_checked;
            if (m == equivariant::ClosedOrbitMode::one_ps_checked) {
              if (auto nu = equivariant::destabilizing_one_ps(data, pt)) {
                json o = outcome(true, {{"point", pj}, {"destabilizing_one_ps", *nu}});
                o["skipped"] = "orbit not closed";
                return o;
              }
            }
            const auto cert = equivariant::azumaya_hypertoric_check(data, pt, std::nullopt, m);
            const auto j = io::to_json(cert);
            return outcome(cert.pass, j, j);
          }};
}

// ---- planning ----

std::vector<std::optional<json>> point_slots(const RunConfig& c) {
  std::vector<std::optional<json>> out;
  if (!c.points.empty()) {
    for (const auto& p : c.points) out.emplace_back(p);
  } else {
    for (int r = 0; r < c.random; ++r) out.emplace_back(std::nullopt);
  }
  return out;
}

std::vector<json> data_list(const RunConfig& c, bool include_subtori) {
  if (c.data) return {*c.data};
  std::vector<json> out;
  for (auto p : c.p)
    for (int n : c.n) {
      out.push_back(io::to_json(diagonal(n, p)));
      if (include_subtori && n > 1) out.push_back(io::to_json(first_coordinate(n, p)));
    }
  return out;
}

// Config points only apply when they match (p, n); otherwise they are run
// once under the first pair.
bool use_given(const RunConfig& c, std::size_t pi, std::size_t ni) { return c.points.empty() || (pi == 0 && ni == 0); }

std::vector<Task> plan(const RunConfig& c) {
  std::vector<Task> tasks;
  const auto& cmd = c.command;
  const bool suite = cmd == "suite";

  auto per_pn = [&](auto&& fn) {
    for (std::size_t pi = 0; pi < c.p.size(); ++pi)
      for (std::size_t ni = 0; ni < c.n.size(); ++ni) fn(pi, ni, c.p[pi], c.n[ni]);
  };

  if (cmd == "weyl-verify" || suite) {
    per_pn([&](std::size_t pi, std::size_t ni, std::int64_t p, int n) {
      tasks.push_back(euler_relation_task(p, n));
      tasks.push_back(centrality_task(p, n));
      if (!use_given(c, pi, ni)) return;
      for (const auto& g : point_slots(c)) tasks.push_back(char_poly_task(p, c.ext, n, g));
    });
  }
  if (cmd == "cover-fiber" || suite) {
    per_pn([&](std::size_t pi, std::size_t ni, std::int64_t p, int n) {
      if (!use_given(c, pi, ni)) return;
      for (const auto& g : point_slots(c)) tasks.push_back(cover_fiber_task(p, c.ext, n, g));
    });
  }
  if (cmd == "point-azumaya" || suite) {
    per_pn([&](std::size_t pi, std::size_t ni, std::int64_t p, int n) {
      if (!use_given(c, pi, ni)) return;
      for (const auto& g : point_slots(c)) {
        tasks.push_back(point_module_task(p, c.ext, n, g));
        tasks.push_back(azumaya_point_task(p, c.ext, n, g));
      }
    });
  }
  if (cmd == "arrangement-report" || suite)
    for (const auto& d : data_list(c, false)) tasks.push_back(arrangement_task(d));
  if (cmd == "freeness-check" || suite)
    for (const auto& d : data_list(c, false)) tasks.push_back(freeness_task(d));
  if (suite && !c.data)
    for (auto p : c.p) tasks.push_back(polytope_regression_task(p));
  if (cmd == "hypertoric-azumaya" || suite) {
    for (const auto& d : data_list(c, true)) {
      for (const auto& g : point_slots(c)) {
        tasks.push_back(invariant_dims_task(d, c.ext, g));
        tasks.push_back(hypertoric_azumaya_task(d, c.ext, g, c.closed_orbit));
      }
    }
  }
  return tasks;
}

json run_task(const Task& t, std::uint64_t seed, std::size_t index) {
  auto rng = SplitMix64::derive(seed, index);
  json check{{"kind", t.kind}, {"params", t.params}};
  try {
    json o = t.fn(rng);
    for (auto& [k, v] : o.items()) check[k] = v;
  } catch (const CounterexampleError& e) {
    check["pass"] = false;
    check["error"] = e.what();
    check["witness"] = e.witness();
  } catch (const std::exception& e) {
    check["pass"] = false;
    check["error"] = e.what();
    check["witness"] = json{{"params", t.params}};
  }
  return check;
}

std::vector<json> execute(const std::vector<Task>& tasks, std::uint64_t seed, int jobs) {
  std::vector<json> results(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < tasks.size();) results[i] = run_task(tasks[i], seed, i);
  };
  const auto workers = static_cast<std::size_t>(std::max(1, jobs));
  if (workers == 1 || tasks.size() <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < std::min(workers, tasks.size()); ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return results;
}

template <typename T>
std::vector<T> as_list(const json& j) {
  if (j.is_array()) return j.get<std::vector<T>>();
  return {j.get<T>()};
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file: " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw UsageError("malformed JSON in " + path + ": " + e.what());
  }
}

}  // namespace

void apply_config(RunConfig& c, const json& j) {
  if (!j.is_object()) throw UsageError("config must be a JSON object");
  try {
    if (j.contains("B")) {
      c.data = j;
    } else if (j.contains("data")) {
      c.data = j.at("data");
    }
    if (j.contains("p") && !j.contains("B")) c.p = as_list<std::int64_t>(j.at("p"));
    if (j.contains("n") && !j.contains("B")) c.n = as_list<int>(j.at("n"));
    if (j.contains("ext")) c.ext = j.at("ext").get<int>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("random")) c.random = j.at("random").get<int>();
    if (j.contains("jobs")) c.jobs = j.at("jobs").get<int>();
    if (j.contains("points")) c.points = j.at("points").get<std::vector<json>>();
    if (j.contains("closed_orbit")) c.closed_orbit = j.at("closed_orbit").get<std::string>();
    if (j.contains("caps")) {
      const auto& caps = j.at("caps");
      c.max_p = caps.value("max_p", c.max_p);
      c.max_n = caps.value("max_n", c.max_n);
      c.max_combinatorial_n = caps.value("max_combinatorial_n", c.max_combinatorial_n);
    }
  } catch (const json::exception& e) {
    throw UsageError(std::string("invalid config: ") + e.what());
  }
  if (c.data) {
    try {
      io::data_from_json(*c.data);
    } catch (const std::exception& e) {
      throw UsageError(std::string("invalid hypertoric data: ") + e.what());
    }
  }
}

void validate(const RunConfig& c) {
  if (std::find(kCommands.begin(), kCommands.end(), c.command) == kCommands.end())
    throw UsageError("unknown command: " + c.command);
  if (c.p.empty() || c.n.empty()) throw UsageError("--p and --n need at least one value");
  for (auto p : c.p) {
    if (!fq::is_prime(p)) throw UsageError("--p: " + std::to_string(p) + " is not prime");
    if (p > c.max_p) throw UsageError("--p: " + std::to_string(p) + " exceeds the cap " + std::to_string(c.max_p));
  }
  for (int n : c.n)
    if (n < 1 || n > c.max_n)
      throw UsageError("--n: " + std::to_string(n) + " outside 1.." + std::to_string(c.max_n));
  if (c.ext < 1) throw UsageError("--ext must be at least 1");
  for (auto p : c.p)
    if (order(p, c.ext * static_cast<int>(p)) >= kMaxFieldOrder)
      throw UsageError("--ext: fibers over F_" + std::to_string(p) + "^" + std::to_string(c.ext) +
                       " need a field that is too large");
  if (c.random < 0) throw UsageError("--random must be non-negative");
  if (c.jobs < 1) throw UsageError("--jobs must be at least 1");
  if (c.closed_orbit != "asserted" && c.closed_orbit != "1ps-checked")
    throw UsageError("closed_orbit must be \"asserted\" or \"1ps-checked\"");
  if ((c.command == "arrangement-report" || c.command == "freeness-check") && !c.data)
    throw UsageError(c.command + " needs --config with hypertoric data");
  if (c.data) {
    const int n = c.data->at("n").get<int>();
    if (n > c.max_combinatorial_n)
      throw UsageError("hypertoric data: n = " + std::to_string(n) + " exceeds the cap " +
                       std::to_string(c.max_combinatorial_n));
    if (c.command == "hypertoric-azumaya" && n > c.max_n)
      throw UsageError("hypertoric data: n = " + std::to_string(n) + " exceeds the matrix cap " +
                       std::to_string(c.max_n));
  }
  for (const auto& pt : c.points) {
    if (!pt.is_object() || !pt.contains("p") || !pt.contains("b") || !pt.contains("omega_p"))
      throw UsageError("points: each entry needs p, b and omega_p");
    if (c.command == "cover-fiber") continue;
    if (!pt.contains("c")) throw UsageError("points: " + c.command + " needs c in every point");
    try {
      const auto parsed = io::point_from_json(pt);
      if (c.data && parsed.n != c.data->at("n").get<int>())
        throw UsageError("points: n = " + std::to_string(parsed.n) + " does not match the hypertoric data");
    } catch (const UsageError&) {
      throw;
    } catch (const std::exception& e) {
      throw UsageError(std::string("points: ") + e.what());
    }
  }
}

int exit_status(const json& report) { return report.at("pass").get<bool>() ? 0 : 1; }

json build_report(const RunConfig& c) {
  const auto results = execute(plan(c), c.seed, c.jobs);
  json checks = json::array();
  std::map<std::string, std::array<std::size_t, 3>> kinds;  // passed, failed, skipped
  std::size_t passed = 0, failed = 0, skipped = 0;
  for (const auto& r : results) {
    auto& k = kinds[r.at("kind").get<std::string>()];
    if (r.contains("skipped")) {
      ++skipped, ++k[2];
    } else if (r.at("pass").get<bool>()) {
      ++passed, ++k[0];
    } else {
      ++failed, ++k[1];
    }
    checks.push_back(r);
  }
  json by_kind = json::object();
  for (const auto& [name, cnt] : kinds)
    by_kind[name] = {{"passed", cnt[0]}, {"failed", cnt[1]}, {"skipped", cnt[2]}, {"total", cnt[0] + cnt[1] + cnt[2]}};
  json config{{"p", c.p},   {"n", c.n},           {"ext", c.ext},
              {"random", c.random}, {"closed_orbit", c.closed_orbit},
              {"caps", {{"max_p", c.max_p}, {"max_n", c.max_n}, {"max_combinatorial_n", c.max_combinatorial_n}}}};
  if (c.data) config["data"] = *c.data;
  if (!c.points.empty()) config["points"] = c.points;
  return json{{"schema", schema_version},
              {"command", c.command},
              {"config", config},
              {"prng", {{"name", "splitmix64"}, {"seed", c.seed}, {"stream", "derive(seed, check index)"}}},
              {"checks", checks},
              {"summary",
               {{"total", results.size()}, {"passed", passed}, {"failed", failed}, {"skipped", skipped},
                {"by_kind", by_kind}}},
              {"pass", failed == 0}};
}

std::string summary_text(const json& report) {
  std::ostringstream os;
  const auto& s = report.at("summary");
  os << "frobsplit " << report.at("command").get<std::string>() << " (seed "
     << report.at("prng").at("seed").get<std::uint64_t>() << "): " << s.at("total").get<std::size_t>() << " checks, "
     << s.at("passed").get<std::size_t>() << " passed, " << s.at("failed").get<std::size_t>() << " failed";
  if (s.at("skipped").get<std::size_t>() > 0) os << ", " << s.at("skipped").get<std::size_t>() << " skipped";
  os << "\n";
  for (const auto& [kind, cnt] : s.at("by_kind").items())
    os << "  " << std::left << std::setw(22) << kind << cnt.at("passed").get<std::size_t>() << "/"
       << cnt.at("total").get<std::size_t>() << "\n";
  for (const auto& chk : report.at("checks"))
    if (!chk.at("pass").get<bool>())
      os << "  FAIL " << chk.at("kind").get<std::string>() << " " << chk.at("params").dump()
         << (chk.contains("error") ? " : " + chk.at("error").get<std::string>() : "") << "\n";
  os << (report.at("pass").get<bool>() ? "PASS" : "FAIL") << "\n";
  return os.str();
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Point-level verification of Frobenius splittings of Weyl algebras and hypertoric reductions",
               "frobsplit"};
  app.require_subcommand(1);
  RunConfig c;
  std::string p_list, n_list, config_path;

  std::map<std::string, CLI::App*> subs;
  for (const auto& name : kCommands) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--p", p_list, "characteristics, comma separated (e.g. 2,3)");
    sub->add_option("--n", n_list, "numbers of variables, comma separated");
    sub->add_option("--ext", c.ext, "base field F_{p^ext}");
    sub->add_option("--seed", c.seed, "PRNG seed");
    sub->add_option("--random", c.random, "random points per (p, n)");
    sub->add_option("--config", config_path, "JSON config or hypertoric data");
    sub->add_option("--out", c.out, "write the JSON report here");
    sub->add_option("--jobs", c.jobs, "worker threads");
    subs[name] = sub;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "frobsplit: " << e.what() << "\n";
    return 2;
  }

  json report;
  try {
    for (const auto& [name, sub] : subs)
      if (sub->parsed()) c.command = name;
    // flags override the config file
    RunConfig flags = c;
    if (!config_path.empty()) {
      apply_config(c, read_json_file(config_path));
      auto* sub = subs.at(c.command);
      if (sub->count("--ext")) c.ext = flags.ext;
      if (sub->count("--seed")) c.seed = flags.seed;
      if (sub->count("--random")) c.random = flags.random;
      if (sub->count("--jobs")) c.jobs = flags.jobs;
    }
    auto parse_list = [](const std::string& s, auto& target, const char* flag) {
      using T = typename std::decay_t<decltype(target)>::value_type;
      std::vector<T> values;
      std::stringstream ss(s);
      std::string item;
      while (std::getline(ss, item, ',')) {
        try {
          std::size_t used = 0;
          const long long v = std::stoll(item, &used);
          if (used != item.size()) throw std::invalid_argument(item);
          values.push_back(static_cast<T>(v));
        } catch (const std::exception&) {
          throw UsageError(std::string(flag) + ": not an integer: '" + item + "'");
        }
      }
      target = values;
    };
    if (!p_list.empty()) parse_list(p_list, c.p, "--p");
    if (!n_list.empty()) parse_list(n_list, c.n, "--n");
    validate(c);
    report = build_report(c);
  } catch (const UsageError& e) {
    err << "frobsplit: " << e.what() << "\n";
    return 2;
  }

  const std::string text = report.dump(2) + "\n";
  if (!c.out.empty()) {
    std::ofstream f(c.out, std::ios::binary);
    if (!f || !(f << text) || !f.flush()) {
      err << "frobsplit: cannot write report to " << c.out << "\n";
      return 2;
    }
    out << summary_text(report);
  } else {
    out << text;
    err << summary_text(report);
  }
  return exit_status(report);
}

}  // namespace frobsplit::cli
