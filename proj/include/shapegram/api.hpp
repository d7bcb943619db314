#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "shapegram/grammar.hpp"
#include "shapegram/production.hpp"
#include "shapegram/voxel.hpp"

namespace shapegram::api {

using nlohmann::json;

struct Response {
  int status = 200;
  json body;
};

/// The JSON API behind the co-creative studio, independent of any transport.
/// Sessions live in memory. Within a session mutations are serialized and
/// reads see a consistent snapshot; distinct sessions proceed in parallel.
///
///   POST /sessions                 {grammar, initial?, seed?}        -> 201
///   GET  /sessions/{id}
///   GET  /sessions/{id}/choices
///   POST /sessions/{id}/apply      {choice}                          409 on conflict
///   POST /sessions/{id}/undo                                         409 when empty
///   POST /sessions/{id}/enclosure
///   GET  /sessions/{id}/model
///   POST /infer                    {model | corpus, spec?, alpha?, ops?, overlap?, plateau?, max_steps?}
///   POST /induce                   {shape_sets, initial?}
///   POST /generate                 {grammar, seed?, max_steps?, enclosure?}
///   GET  /corpus, GET /corpus/{name}
///
/// Errors are {"error": {"code", "message"}} with 400 for bad requests, 404 for
/// unknown sessions or paths and 409 for conflicts.
class Api {
 public:
  explicit Api(std::vector<VoxelModel> corpus = {});

  Response handle(std::string_view method, std::string_view path, std::string_view body);

 private:
  struct Session {
    std::string id;
    std::shared_ptr<const ShapeGrammar> grammar;
    Production production;
    std::vector<Production> undo;  // snapshots taken before each mutation
    mutable std::shared_mutex mutex;
  };

  std::shared_ptr<Session> find_session(const std::string& id) const;
  Response create_session(const json& body);
  Response session_get(const std::string& id, const std::string& what);
  Response session_post(const std::string& id, const std::string& what, const json& body);
  Response infer(const json& body) const;
  Response induce(const json& body) const;
  Response generate(const json& body) const;
  Response corpus(const std::string& name) const;

  std::vector<VoxelModel> corpus_;
  mutable std::mutex sessions_mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t next_session_ = 1;
};

/// Port from SHAPEGRAM_PORT, else 8080.
int default_port();

/// Blocks serving `api` over HTTP. Returns false if the socket cannot be bound.
bool serve(Api& api, const std::string& host, int port);

}  // namespace shapegram::api
