#pragma once

#include <filesystem>
#include <map>
#include <string>

#include <json.hpp>

#include "nrlb/core/error.hpp"
#include "nrlb/core/hash.hpp"
#include "nrlb/core/io.hpp"

namespace nrlb::agents {

/// Versioned catalog of prompt templates. The manifest binds agent-role
/// names to template files; templates use {{name}} placeholders. The catalog
/// version hash is recorded into every round artifact so runs stay
/// auditable.
class PromptCatalog {
public:
  static PromptCatalog load(const std::filesystem::path& dir) {
    PromptCatalog catalog;
    nlohmann::json manifest =
        nlohmann::json::parse(read_file(dir / "manifest.json"), nullptr, false);
    if (manifest.is_discarded() || !manifest.is_object() || !manifest.contains("bindings")) {
      throw ConfigError("prompt catalog manifest is missing or malformed: " + dir.string());
    }
    catalog.version_ = manifest.value("version", "0");
    for (const auto& [binding, file] : manifest["bindings"].items()) {
      catalog.templates_[binding] = read_file(dir / file.get<std::string>());
    }
    std::string digest = "catalog-version:" + catalog.version_ + "\n";
    for (const auto& [binding, content] : catalog.templates_) {
      digest += binding;
      digest.push_back('\0');
      digest += content;
      digest.push_back('\0');
    }
    catalog.hash_ = content_hash(digest);
    return catalog;
  }

  bool has(const std::string& binding) const { return templates_.count(binding) > 0; }

  /// Fills {{name}} placeholders. Unknown bindings and placeholders without
  /// a value are configuration errors; a value that goes unused is fine.
  std::string render(const std::string& binding,
                     const std::map<std::string, std::string>& vars) const {
    auto it = templates_.find(binding);
    if (it == templates_.end()) {
      throw ConfigError("prompt catalog has no binding: " + binding);
    }
    const std::string& tmpl = it->second;
    std::string out;
    out.reserve(tmpl.size());
    std::size_t pos = 0;
    while (pos < tmpl.size()) {
      std::size_t open = tmpl.find("{{", pos);
      if (open == std::string::npos) {
        out.append(tmpl, pos, tmpl.size() - pos);
        break;
      }
      std::size_t close = tmpl.find("}}", open + 2);
      if (close == std::string::npos) {
        out.append(tmpl, pos, tmpl.size() - pos);
        break;
      }
      out.append(tmpl, pos, open - pos);
      std::string name = tmpl.substr(open + 2, close - open - 2);
      auto var = vars.find(name);
      if (var == vars.end()) {
        throw ConfigError("prompt template '" + binding + "' has unresolved placeholder {{" +
                          name + "}}");
      }
      out += var->second;
      pos = close + 2;
    }
    return out;
  }

  const std::string& version() const { return version_; }
  const std::string& version_hash() const { return hash_; }

private:
  std::map<std::string, std::string> templates_;
  std::string version_;
  std::string hash_;
};

}  // namespace nrlb::agents
