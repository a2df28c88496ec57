#include "cubepaths/json_io.hpp"

namespace cubepaths {

json pair_set_to_json(const PairSet& a) {
  json pairs = json::array();
  for (const Pair& p : a.pairs)
    pairs.push_back(json::array({format_vertex(p.a), format_vertex(p.b)}));
  return json{{"schema", kSchemaVersion}, {"n", a.dim}, {"pairs", pairs}};
}

PairSet pair_set_from_json(const json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("pairs"))
    throw cube_error(errc::invalid_input, "pair-set JSON needs 'n' and 'pairs'");
  int dim = j.at("n").get<int>();
  std::vector<Pair> pairs;
  for (const auto& e : j.at("pairs")) {
    if (!e.is_array() || e.size() != 2)
      throw cube_error(errc::invalid_input, "each pair must be a two-element array");
    pairs.push_back(make_pair_of(parse_vertex(e[0].get<std::string>(), dim),
                                 parse_vertex(e[1].get<std::string>(), dim)));
  }
  return make_pair_set(dim, std::move(pairs));
}

json connector_to_json(const Connector& c) {
  json paths = json::array();
  for (const Path& p : c.paths) {
    json seq = json::array();
    for (const Vertex& v : p.verts) seq.push_back(format_vertex(v));
    paths.push_back(seq);
  }
  return json{{"schema", kSchemaVersion}, {"n", c.dim}, {"paths", paths}};
}

Connector connector_from_json(const json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("paths"))
    throw cube_error(errc::invalid_input, "connector JSON needs 'n' and 'paths'");
  Connector c;
  c.dim = j.at("n").get<int>();
  for (const auto& seq : j.at("paths")) {
    Path p;
    for (const auto& tok : seq)
      p.verts.push_back(parse_vertex(tok.get<std::string>(), c.dim));
    if (p.verts.empty())
      throw cube_error(errc::invalid_input, "empty path in connector JSON");
    c.paths.push_back(std::move(p));
  }
  return c;
}

json report_to_json(const SolveReport& r, bool include_connector) {
  json out{{"schema", kSchemaVersion},
           {"verdict", verdict_name(r.verdict)},
           {"obstruction", obstruction_name(r.obstruction)},
           {"reason", r.reason}};
  if (r.verdict == Verdict::connected && include_connector)
    out["connector"] = connector_to_json(r.connector);
  out["stats"] = json{{"completions_tried", r.stats.completions_tried},
                      {"completions_failed", r.stats.completions_failed},
                      {"subsolves", r.stats.subsolves},
                      {"fallback_calls", r.stats.fallback_calls},
                      {"search_nodes", r.stats.search_nodes},
                      {"verifications", r.stats.verifications},
                      {"max_depth", r.stats.max_depth},
                      {"strategy_path", r.stats.strategy_path}};
  return out;
}

json census_record_to_json(const CensusRecord& r, int dim) {
  json pairs = json::array();
  for (const Pair& p : r.canonical.pairs)
    pairs.push_back(json::array({format_vertex(p.a), format_vertex(p.b)}));
  json out{{"n", dim},
           {"pairs", pairs},
           {"verdict", r.connectable ? "connectable" : "non-connectable"},
           {"orbit_size", r.orbit_size},
           {"certificate", r.certificate},
           {"nodes", r.nodes}};
  return out;
}

json trace_to_json(const CompletionTrace& t) {
  json steps = json::array();
  for (const CompletionStep& s : t.steps) {
    json consumed = json::array(), produced = json::array(), bridges = json::array();
    for (const Pair& p : s.consumed)
      consumed.push_back(json::array({format_vertex(p.a), format_vertex(p.b)}));
    for (const Pair& p : s.produced)
      produced.push_back(json::array({format_vertex(p.a), format_vertex(p.b)}));
    for (const Vertex& v : s.bridges) bridges.push_back(format_vertex(v));
    steps.push_back(json{{"kind", step_kind_name(s.kind)},
                         {"consumed", consumed},
                         {"produced", produced},
                         {"bridges", bridges}});
  }
  json script = json::array();
  for (const Vertex& v : t.merge_script) script.push_back(format_vertex(v));
  return json{{"schema", kSchemaVersion},
              {"n", t.dim},
              {"coordinate", t.coord},
              {"input", pair_set_to_json(t.input)},
              {"output", pair_set_to_json(t.output)},
              {"steps", steps},
              {"merge_script", script}};
}

json classification_to_json(const PairSet& a) {
  json out{{"schema", kSchemaVersion}, {"n", a.dim}, {"size", a.size()}};
  out["chi"] = chi(a);
  out["odd"] = is_odd_set(a);
  out["balanced"] = is_balanced(a);
  out["pure"] = is_pure(a);
  int edges = 0;
  for (const Pair& p : a.pairs) edges += is_edge_pair(p) ? 1 : 0;
  out["edge_pairs"] = edges;
  if (is_odd_set(a)) {
    DiminishableVerdict d = is_diminishable(a);
    out["diminishable"] = json{{"value", d.value}, {"reason", d.reason}};
  } else {
    out["diminishable"] = json{{"value", false}, {"reason", "not an odd pair-set"}};
  }
  json encs = json::array();
  for (const Vertex& v : enc(a)) encs.push_back(format_vertex(v));
  out["enc"] = encs;
  json sep = json::array(), blocked = json::array();
  if (a.size() == a.dim) {
    for (int i = 0; i < a.dim; ++i) {
      if (separating(a, i)) sep.push_back(i);
      if (bad_coordinate(a, i)) blocked.push_back(i);
    }
  }
  out["separating"] = sep;
  out["bad"] = blocked;
  json sigmas = json::array();
  for (int i = 0; i < a.dim; ++i) {
    SideCounts s = side_counts(a, i);
    sigmas.push_back(json::array({s.n0, s.n1}));
  }
  out["sigma"] = sigmas;
  return out;
}

}  // namespace cubepaths
