#include "shapegram/api.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>
#include <regex>

#include <httplib.h>

#include "shapegram/enclosure.hpp"
#include "shapegram/inference.hpp"
#include "shapegram/io.hpp"

namespace shapegram::api {

namespace {

Response error(int status, std::string_view code, const std::string& message) {
  return {status, {{"error", {{"code", code}, {"message", message}}}}};
}

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ConflictingPlacement:
    case ErrorCode::NothingToUndo:
      return 409;
    default:
      return 400;
  }
}

std::string message_of(const Error& e) {
  const std::string what = e.what();
  const auto colon = what.find(": ");
  return colon == std::string::npos ? what : what.substr(colon + 2);
}

[[noreturn]] void bad_request(const std::string& what) { throw Error(ErrorCode::InvalidArgument, what); }

const json& require(const json& body, const char* key) {
  const auto it = body.find(key);
  if (it == body.end()) throw Error(ErrorCode::MissingField, std::string("request has no \"") + key + "\"");
  return *it;
}

std::uint64_t seed_or_random(const json& body) {
  const auto it = body.find("seed");
  if (it == body.end() || it->is_null()) {
    std::random_device rd;
    return (std::uint64_t{rd()} << 32) | rd();
  }
  if (!it->is_number_unsigned()) bad_request("seed must be a non-negative integer");
  return it->get<std::uint64_t>();
}

std::size_t non_negative(const json& v, const char* what) {
  if (!v.is_number_unsigned()) bad_request(std::string(what) + " must be a non-negative integer");
  return v.get<std::size_t>();
}

bool boolean(const json& body, const char* key, bool fallback) {
  const auto it = body.find(key);
  if (it == body.end()) return fallback;
  if (!it->is_boolean()) bad_request(std::string(key) + " must be a boolean");
  return it->get<bool>();
}

json production_body(const Production& p) {
  return {{"production", io::production_to_json(p)}, {"hash", io::production_hash(p)}, {"seed", p.seed}};
}

json choices_json(const ShapeGrammar& g, const Production& p) {
  json out = json::array();
  const auto choices = step_choices(g, p);
  for (std::size_t k = 0; k < choices.size(); ++k) {
    const Choice& c = choices[k];
    const ShapeRule& rule = g.rules()[c.rule];
    const PlacedShape rhs = place(g, rule.rhs, c.rhs_pose);
    json blocks = json::array();
    for (const auto& b : rhs.blocks) blocks.push_back({{"t", b.type.token()}, {"p", {b.pos.x, b.pos.y, b.pos.z}}});
    out.push_back({{"index", k},
                   {"target", c.target},
                   {"rule", c.rule},
                   {"lhs_class", rule.lhs_class},
                   {"lhs_anchor", rule.lhs_anchor},
                   {"rhs", rule.rhs},
                   {"rhs_class", rhs.cls},
                   {"lhs_map", io::transform_to_json(c.lhs_map)},
                   {"rhs_pose", io::transform_to_json(c.rhs_pose)},
                   {"conflict", c.conflict},
                   {"duplicate", c.duplicate},
                   {"blocks", std::move(blocks)}});
  }
  return out;
}

InferenceParams inference_params(const json& body) {
  InferenceParams params;
  if (const auto it = body.find("spec"); it != body.end()) {
    if (!it->is_string()) bad_request("spec must be a string");
    params.spec = parse_shape_spec(it->get<std::string>());
  }
  if (const auto it = body.find("alpha"); it != body.end()) {
    if (!it->is_number()) bad_request("alpha must be a number");
    params.alpha = it->get<double>();
  }
  if (const auto it = body.find("ops"); it != body.end()) {
    if (!it->is_string()) bad_request("ops must be a string");
    params.ops = parse_search_ops(it->get<std::string>());
  }
  params.overlap = boolean(body, "overlap", params.overlap);
  params.plateau_merges = boolean(body, "plateau", params.plateau_merges);
  if (const auto it = body.find("max_steps"); it != body.end() && !it->is_null()) {
    params.max_steps = non_negative(*it, "max_steps");
  }
  if (!std::isfinite(params.alpha) || params.alpha < 0) bad_request("alpha must be a non-negative number");
  return params;
}

}  // namespace

Api::Api(std::vector<VoxelModel> corpus) : corpus_(std::move(corpus)) {}

Response Api::handle(std::string_view method, std::string_view path, std::string_view body_text) {
  static const std::regex session_path(R"(/sessions/([A-Za-z0-9_-]+)(?:/([a-z]+))?)");
  static const std::regex corpus_path(R"(/corpus/([^/]+))");
  try {
    json body = json::object();
    if (method == "POST" && !body_text.empty()) {
      body = json::parse(body_text.begin(), body_text.end(), nullptr, false);
      if (body.is_discarded()) return error(400, "MalformedDocument", "request body is not valid JSON");
      if (!body.is_object()) return error(400, "MalformedDocument", "request body must be a JSON object");
    }
    const std::string p(path);
    std::smatch m;
    if (p == "/sessions") {
      if (method == "POST") return create_session(body);
    } else if (std::regex_match(p, m, session_path)) {
      if (method == "GET") return session_get(m[1], m[2]);
      if (method == "POST") return session_post(m[1], m[2], body);
    } else if (p == "/infer") {
      if (method == "POST") return infer(body);
    } else if (p == "/induce") {
      if (method == "POST") return induce(body);
    } else if (p == "/generate") {
      if (method == "POST") return generate(body);
    } else if (p == "/corpus") {
      if (method == "GET") return corpus("");
    } else if (std::regex_match(p, m, corpus_path)) {
      if (method == "GET") return corpus(m[1]);
    } else {
      return error(404, "NotFound", "no route for " + p);
    }
    return error(405, "MethodNotAllowed", std::string(method) + " is not supported on " + p);
  } catch (const Error& e) {
    return error(status_for(e.code()), to_string(e.code()), message_of(e));
  } catch (const json::exception& e) {
    return error(400, "MalformedDocument", e.what());
  }
}

std::shared_ptr<Api::Session> Api::find_session(const std::string& id) const {
  std::lock_guard lock(sessions_mutex_);
  const auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

Response Api::create_session(const json& body) {
  // Either {"grammar": {...}} or a bare grammar document.
  const json& doc = body.contains("grammar") ? body["grammar"] : body;
  auto grammar = std::make_shared<const ShapeGrammar>(io::grammar_from_json(doc));
  std::optional<ShapeId> initial;
  if (const auto it = body.find("initial"); it != body.end() && !it->is_null()) {
    if (!it->is_number_integer()) bad_request("initial must be a shape id");
    initial = it->get<ShapeId>();
  }
  const std::uint64_t seed = seed_or_random(body);

  auto session = std::make_shared<Session>();
  session->grammar = grammar;
  session->production = start(*grammar, initial, seed);
  {
    std::lock_guard lock(sessions_mutex_);
    session->id = "s" + std::to_string(next_session_++);
    sessions_.emplace(session->id, session);
  }
  json out = production_body(session->production);
  out["session"] = session->id;
  return {201, std::move(out)};
}

Response Api::session_get(const std::string& id, const std::string& what) {
  const auto session = find_session(id);
  if (!session) return error(404, "UnknownSession", "no session " + id);
  std::shared_lock lock(session->mutex);
  const Production& p = session->production;
  if (what.empty()) {
    json out = production_body(p);
    out["session"] = session->id;
    out["undo_depth"] = session->undo.size();
    out["grammar"] = io::grammar_to_json(*session->grammar);
    return {200, std::move(out)};
  }
  if (what == "choices") {
    return {200, {{"choices", choices_json(*session->grammar, p)}, {"hash", io::production_hash(p)}}};
  }
  if (what == "model") return {200, io::model_to_json(to_model(p, "session-" + session->id))};
  return error(404, "NotFound", "no route for /sessions/" + id + "/" + what);
}

Response Api::session_post(const std::string& id, const std::string& what, const json& body) {
  const auto session = find_session(id);
  if (!session) return error(404, "UnknownSession", "no session " + id);
  std::unique_lock lock(session->mutex);
  Production& p = session->production;
  if (what == "apply") {
    const std::size_t index = non_negative(require(body, "choice"), "choice");
    Production next = apply(*session->grammar, p, index);
    const bool changed = next.history.size() != p.history.size();
    if (changed) {
      session->undo.push_back(std::move(p));
      p = std::move(next);
    }
    json out = production_body(p);
    out["changed"] = changed;
    return {200, std::move(out)};
  }
  if (what == "undo") {
    if (session->undo.empty()) throw Error(ErrorCode::NothingToUndo, "session " + id + " has nothing to undo");
    p = std::move(session->undo.back());
    session->undo.pop_back();
    return {200, production_body(p)};
  }
  if (what == "enclosure") {
    EnclosureReport report = enforce(p);
    session->undo.push_back(std::move(p));
    p = std::move(report.production);
    json out = production_body(p);
    out["removed"] = report.removed;
    out["iterations"] = report.iterations;
    out["rounds"] = report.rounds;
    return {200, std::move(out)};
  }
  return error(404, "NotFound", "no route for /sessions/" + id + "/" + what);
}

Response Api::infer(const json& body) const {
  VoxelModel model;
  if (const auto it = body.find("corpus"); it != body.end()) {
    if (!it->is_string()) bad_request("corpus must be a model name");
    const auto name = it->get<std::string>();
    const auto found = std::find_if(corpus_.begin(), corpus_.end(), [&](const auto& m) { return m.name() == name; });
    if (found == corpus_.end()) return error(404, "UnknownModel", "no corpus model " + name);
    model = *found;
  } else {
    model = io::model_from_json(require(body, "model"));
  }
  const InferenceParams params = inference_params(body);
  const InferenceResult result = hill_climb(model, params);
  return {200,
          {{"shape_set", io::shape_set_to_json(result.set)},
           {"cost", cost(result.set, params.alpha)},
           {"steps", result.steps.size()},
           {"initial_shapes", result.initial_shapes},
           {"warnings", result.warnings}}};
}

Response Api::induce(const json& body) const {
  const json& docs = require(body, "shape_sets");
  if (!docs.is_array()) bad_request("shape_sets must be an array");
  std::vector<ShapeSet> sets;
  for (const auto& d : docs) sets.push_back(io::shape_set_from_json(d));
  InduceOptions options;
  if (const auto it = body.find("initial"); it != body.end() && !it->is_null()) {
    if (!it->is_number_integer()) bad_request("initial must be a shape id");
    options.initial = it->get<ShapeId>();
  }
  return {200, {{"grammar", io::grammar_to_json(shapegram::induce(sets, options))}}};
}

Response Api::generate(const json& body) const {
  const ShapeGrammar g = io::grammar_from_json(require(body, "grammar"));
  const std::uint64_t seed = seed_or_random(body);
  std::size_t max_steps = 50;
  if (const auto it = body.find("max_steps"); it != body.end()) max_steps = non_negative(*it, "max_steps");
  Production p = shapegram::generate(g, seed, max_steps);
  json out = json::object();
  if (boolean(body, "enclosure", false)) {
    EnclosureReport report = enforce(p);
    p = std::move(report.production);
    out["removed"] = report.removed;
    out["iterations"] = report.iterations;
  }
  out.update(production_body(p));
  out["model"] = io::model_to_json(to_model(p));
  return {200, std::move(out)};
}

Response Api::corpus(const std::string& name) const {
  if (name.empty()) {
    json models = json::array();
    for (const auto& m : corpus_) models.push_back({{"name", m.name()}, {"blocks", m.size()}});
    return {200, {{"models", std::move(models)}}};
  }
  for (const auto& m : corpus_) {
    if (m.name() == name) return {200, io::model_to_json(m)};
  }
  return error(404, "UnknownModel", "no corpus model " + name);
}

int default_port() {
  if (const char* env = std::getenv("SHAPEGRAM_PORT")) {
    char* end = nullptr;
    const long port = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && port > 0 && port < 65536) return static_cast<int>(port);
  }
  return 8080;
}

bool serve(Api& api, const std::string& host, int port) {
  httplib::Server server;
  const auto dispatch = [&api](const httplib::Request& req, httplib::Response& res) {
    const Response r = api.handle(req.method, req.path, req.body);
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
  };
  server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                              {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                              {"Access-Control-Allow-Headers", "Content-Type"}});
  server.Get(".*", dispatch);
  server.Post(".*", dispatch);
  server.Options(".*", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
  return server.listen(host, port);
}

}  // namespace shapegram::api
