#include "compumat/service.hpp"

#include <thread>

#include "compumat/fab.hpp"
#include "compumat/json_io.hpp"
#include "compumat/reports.hpp"
#include "httplib.h"

namespace compumat {
namespace {

struct Reply {
  Json payload;
  int check_code = 0;  // nonzero: a completed check that failed
  std::string message;
};

struct FileReply {
  std::string bytes;
  std::string content_type;
  std::string filename;
};

const Json& field(const Json& p, const char* key) {
  if (!p.contains(key)) throw ValidationError(std::string("missing field '") + key + "'");
  return p.at(key);
}

double number_or(const Json& p, const char* key, double fallback) {
  if (!p.contains(key)) return fallback;
  if (!p.at(key).is_number()) throw ValidationError(std::string("field '") + key + "' must be a number");
  return p.at(key).get<double>();
}

bool flag_or(const Json& p, const char* key, bool fallback) {
  if (!p.contains(key)) return fallback;
  if (!p.at(key).is_boolean()) throw ValidationError(std::string("field '") + key + "' must be true or false");
  return p.at(key).get<bool>();
}

void only_keys(const Json& p, std::initializer_list<std::string_view> keys) {
  if (!p.is_object()) throw ValidationError("payload must be a JSON object");
  for (const auto& [k, v] : p.items())
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) throw ValidationError("unknown field '" + k + "'");
}

MagnetPixelGrid bounded_grid(const Json& j, const ServiceOptions& o) {
  auto g = grid_from_json(j);
  if (static_cast<std::size_t>(g.n()) > o.max_grid_n)
    throw ValidationError("grid side " + std::to_string(g.n()) + " exceeds the service limit of " +
                          std::to_string(o.max_grid_n));
  return g;
}

Reply generate(const Json& p, const ServiceOptions& o) {
  Json spec_json = p;
  bool dense = false;
  if (spec_json.is_object() && spec_json.contains("dense")) {
    dense = flag_or(spec_json, "dense", false);
    spec_json.erase("dense");
  }
  CodePairSpec defaults;
  defaults.tau = o.config.tau;
  defaults.gap_mm = o.config.gap_mm;
  defaults.material = o.config.material;
  const auto spec = spec_from_json(spec_json, defaults);
  if (static_cast<std::size_t>(spec.n) > o.max_grid_n) throw ValidationError("n exceeds the service limit");
  const auto out = generate_and_report(spec, dense, std::chrono::steady_clock::now() + o.budget);
  Reply r;
  r.payload = {{"a", to_json(out.pair.a)},
               {"b", to_json(out.pair.b)},
               {"report", to_json(out.pair.report)},
               {"report_text", out.report_text}};
  if (!out.pair.report.pass) {
    r.check_code = 1;
    r.message = "pair does not pass re-verification";
  }
  return r;
}

Reply sweep(const Json& p, const ServiceOptions& o) {
  only_keys(p, {"a", "b", "gap_mm", "mated", "dense", "target", "tau"});
  const auto a = bounded_grid(field(p, "a"), o);
  const auto b = bounded_grid(field(p, "b"), o);
  const double gap = number_or(p, "gap_mm", o.config.gap_mm);
  const bool mated = flag_or(p, "mated", true);
  const auto map = pose_sweep(a, b, gap, mated);
  Reply r;
  r.payload = {{"map", to_json(map)}, {"csv", sweep_csv(map)}};
  if (flag_or(p, "dense", false)) {
    const Pose target = p.contains("target") ? pose_from_json(p.at("target")) : Pose{};
    r.payload["selectivity"] = to_json(verify_selectivity(a, b, target, number_or(p, "tau", o.config.tau), gap, true));
  }
  return r;
}

Reply authenticate(const Json& p, const ServiceOptions& o) {
  only_keys(p, {"sheet_a", "sheet_b", "pose", "gap_mm", "f_min_n", "tol_mm"});
  const auto a = sheet_from_json(field(p, "sheet_a"));
  const auto b = sheet_from_json(field(p, "sheet_b"));
  const Pose pose = p.contains("pose") ? pose_from_json(p.at("pose")) : Pose{};
  std::optional<double> tol;
  if (p.contains("tol_mm")) tol = number_or(p, "tol_mm", 0.0);
  const auto f_min = number_or(p, "f_min_n", 0.0);
  const auto res = double_authenticate(a, b, pose, number_or(p, "gap_mm", o.config.gap_mm), f_min, tol);
  Reply r{to_json(res), 0, {}};
  if (!res.authenticated) {
    r.check_code = 1;
    r.message = "sheets do not authenticate";
  }
  return r;
}

Reply fold(const Json& p, const ServiceOptions& o) {
  only_keys(p, {"net", "gap_mm", "f_min_n", "tau"});
  const auto& doc = field(p, "net");
  const auto net = fold_net_from_json(doc);
  FoldCheckSettings s = fold_settings_from_json(doc, {o.config.gap_mm, 0.0, o.config.tau});
  s.gap_mm = number_or(p, "gap_mm", s.gap_mm);
  s.f_min_n = number_or(p, "f_min_n", s.f_min_n);
  s.tau = number_or(p, "tau", s.tau);
  const auto out = fold_check(net, s);
  Reply r{out.report, 0, {}};
  if (!out.pass) {
    r.check_code = 1;
    r.message = "fold check failed";
  }
  return r;
}

FileReply export_file(std::string_view kind, const Json& p, const ServiceOptions& o) {
  if (kind == "dxf-circuit") {
    only_keys(p, {"sheet"});
    const auto sheet = sheet_from_json(field(p, "sheet"));
    if (!sheet.circuit) throw ValidationError("sheet has no circuit");
    return {export_dxf_circuit(*sheet.circuit, sheet.side_mm), "application/dxf", "circuit.dxf"};
  }
  if (kind == "dxf-outline") {
    only_keys(p, {"side_mm", "count", "spacing_mm"});
    int count = 1;
    if (p.contains("count")) {
      if (!p.at("count").is_number_integer()) throw ValidationError("field 'count' must be an integer");
      count = p.at("count").get<int>();
    }
    return {export_dxf_outline(number_or(p, "side_mm", 50.0), count, number_or(p, "spacing_mm", 5.0)),
            "application/dxf", "outline.dxf"};
  }
  if (kind == "gcode") {
    only_keys(p, {"grid", "plotter"});
    const auto grid = bounded_grid(field(p, "grid"), o);
    const auto profile = p.contains("plotter") ? plotter_from_json(p.at("plotter"), o.config.plotter) : o.config.plotter;
    return {export_plotter_gcode(grid, profile), "text/x-gcode", "magnets.gcode"};
  }
  throw ValidationError("unknown export kind '" + std::string(kind) + "'");
}

std::string envelope(const Json& id, const Json& payload, int code, const std::string& message) {
  Json e{{"id", id}, {"payload", payload}, {"error", nullptr}};
  if (code != 0) e["error"] = {{"code", code}, {"message", message}};
  return e.dump();
}

std::string id_text(const Json& id) {
  if (id.is_null()) return {};
  return id.is_string() ? id.get<std::string>() : id.dump();
}

}  // namespace

int http_status_for(int code) {
  switch (code) {
    case 0: return 200;
    case 1: return 422;
    case 3: return 507;
    default: return 400;
  }
}

ServiceResponse handle_api(std::string_view path, std::string_view body, const ServiceOptions& options) {
  Json id = nullptr;
  ServiceResponse resp;
  auto fail = [&](int code, const std::string& message, const Json& payload = nullptr) {
    resp.status = http_status_for(code);
    resp.content_type = "application/json";
    resp.body = envelope(id, payload, code, message);
    resp.filename.clear();
    return resp;
  };
  try {
    const Json request = parse_json_text(body);
    if (!request.is_object()) throw ValidationError("request must be a JSON object");
    if (request.contains("id")) id = request.at("id");
    resp.request_id = id_text(id);
    for (const auto& [k, v] : request.items())
      if (k != "id" && k != "payload") throw ValidationError("unknown field '" + k + "' in request");
    const Json payload = request.contains("payload") ? request.at("payload") : Json::object();

    constexpr std::string_view export_prefix = "/api/export/";
    if (path.starts_with(export_prefix)) {
      auto file = export_file(path.substr(export_prefix.size()), payload, options);
      resp.status = 200;
      resp.content_type = file.content_type;
      resp.filename = file.filename;
      resp.body = std::move(file.bytes);
      return resp;
    }
    Reply r;
    if (path == "/api/codes/generate") r = generate(payload, options);
    else if (path == "/api/simulate/sweep") r = sweep(payload, options);
    else if (path == "/api/layup/authenticate") r = authenticate(payload, options);
    else if (path == "/api/fold/check") r = fold(payload, options);
    else {
      resp.status = 404;
      resp.body = envelope(id, nullptr, 2, "no such endpoint " + std::string(path));
      return resp;
    }
    resp.status = http_status_for(r.check_code);
    resp.body = envelope(id, r.payload, r.check_code, r.message);
    return resp;
  } catch (const BudgetExhaustedError& e) {
    Json best = Json::array();
    for (const auto& p : e.best()) best.push_back(to_json(p));
    return fail(e.code(), e.what(), Json{{"best", best}});
  } catch (const Error& e) {
    return fail(e.code(), e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(2, e.what());
  } catch (const std::exception& e) {
    return fail(2, e.what());
  }
}

struct Server::Impl {
  ServiceOptions options;
  httplib::Server http;
  std::thread worker;
};

Server::Server(ServiceOptions options, std::optional<std::string> static_dir) : impl_(std::make_unique<Impl>()) {
  impl_->options = std::move(options);
  auto* impl = impl_.get();
  impl->http.Post(R"(/api/.*)", [impl](const httplib::Request& req, httplib::Response& res) {
    const auto r = handle_api(req.path, req.body, impl->options);
    res.status = r.status;
    if (!r.request_id.empty()) res.set_header("X-Request-Id", r.request_id);
    if (!r.filename.empty()) res.set_header("Content-Disposition", "attachment; filename=\"" + r.filename + "\"");
    res.set_content(r.body, r.content_type);
  });
  if (static_dir && !impl->http.set_mount_point("/", *static_dir))
    throw ValidationError("static directory " + *static_dir + " does not exist");
}

Server::~Server() { stop(); }

int Server::bind(const std::string& host, int port) {
  if (port == 0) {
    const int p = impl_->http.bind_to_any_port(host);
    if (p < 0) throw ValidationError("cannot bind " + host);
    return p;
  }
  if (!impl_->http.bind_to_port(host, port)) throw ValidationError("cannot bind " + host + ":" + std::to_string(port));
  return port;
}

void Server::listen() { impl_->http.listen_after_bind(); }

void Server::start() {
  impl_->worker = std::thread([this] { impl_->http.listen_after_bind(); });
  impl_->http.wait_until_ready();
}

void Server::stop() {
  if (!impl_) return;
  impl_->http.stop();
  if (impl_->worker.joinable()) impl_->worker.join();
}

}  // namespace compumat
