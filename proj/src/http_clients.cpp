#include <httplib.h>

#include <nlohmann/json.hpp>

#include "relmap/sources.hpp"

namespace relmap {
namespace {

using json = nlohmann::json;

void check_response(const httplib::Result& res, const std::string& what) {
  if (!res) {
    throw SourceUnavailableError(what + ": " + httplib::to_string(res.error()));
  }
  if (res->status == 429) throw ThrottledError(what + ": HTTP 429");
  if (res->status != 200) throw SourceUnavailableError(what + ": HTTP " + std::to_string(res->status));
}

}  // namespace

HttpSuggestionClient::HttpSuggestionClient(std::string base_url, std::string path, std::string param)
    : base_url_(std::move(base_url)), path_(std::move(path)), param_(std::move(param)) {}

std::vector<std::string> HttpSuggestionClient::complete(const std::string& query) {
  httplib::Client cli(base_url_);
  cli.set_connection_timeout(5);
  cli.set_read_timeout(10);
  const auto res = cli.Get(path_, httplib::Params{{param_, query}}, httplib::Headers{});
  check_response(res, "autocomplete " + base_url_);

  json body;
  try {
    body = json::parse(res->body);
  } catch (const json::parse_error& e) {
    throw ParseError("autocomplete response is not JSON: " + std::string(e.what()));
  }
  // Some endpoints answer ["query", [suggestions...]]; unwrap that shape too.
  if (body.is_array() && body.size() == 2 && body[0].is_string() && body[1].is_array()) body = body[1];
  if (!body.is_array()) throw ParseError("autocomplete response is not a JSON array");
  std::vector<std::string> out;
  for (const auto& item : body) {
    if (!item.is_string()) throw ParseError("autocomplete suggestion is not a string");
    out.push_back(item.get<std::string>());
  }
  return out;
}

HttpCompletionClient::HttpCompletionClient(std::string base_url, std::string model, std::string path,
                                           int max_tokens, std::string api_key)
    : base_url_(std::move(base_url)),
      model_(std::move(model)),
      path_(std::move(path)),
      max_tokens_(max_tokens),
      api_key_(std::move(api_key)) {}

std::string HttpCompletionClient::complete(const std::string& prompt) {
  httplib::Client cli(base_url_);
  cli.set_connection_timeout(5);
  cli.set_read_timeout(60);
  httplib::Headers headers;
  if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);
  const json request{{"model", model_}, {"prompt", prompt}, {"max_tokens", max_tokens_}, {"temperature", 0}};
  const auto res = cli.Post(path_, headers, request.dump(), "application/json");
  check_response(res, "completion " + base_url_);
  try {
    const auto body = json::parse(res->body);
    return body.at("choices").at(0).at("text").get<std::string>();
  } catch (const json::exception& e) {
    throw ParseError("malformed completion response: " + std::string(e.what()));
  }
}

}  // namespace relmap
