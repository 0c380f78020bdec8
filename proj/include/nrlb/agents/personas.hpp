#pragma once

#include <map>
#include <string>
#include <vector>

#include "nrlb/core/error.hpp"

namespace nrlb::agents {

/// A simulated reader profile. prompt_key names the persona's prompt-catalog
/// binding; flag_rules is the descriptive rule text (vocabulary bound,
/// sentence-length bound, structure triggers) the persona applies.
struct ReaderPersona {
  std::string id;
  std::string display_name;
  std::string prompt_key;
  std::string flag_rules;

  bool operator==(const ReaderPersona&) const = default;
};

/// The three core personas are always present; further personas plug in via
/// register_persona. Lookup accepts the short aliases used in ablation
/// tables (ele, non, att, sen, lea).
class PersonaRegistry {
public:
  PersonaRegistry() {
    register_persona(
        {"elementary", "Elementary School Student Reader", "reader_elementary",
         "vocabulary of about 3,000 common words; flags sentences longer than 15 words or "
         "with several subordinate clauses"});
    register_persona(
        {"non_native", "Non-Native Reader", "reader_non_native",
         "knows high-frequency vocabulary; flags rare or idiomatic terms, unexplained "
         "cultural references, garden-path constructions, reduced relative clauses, and "
         "repeated passive voice"});
    register_persona(
        {"attention_deficit", "Attention-Deficit Reader", "reader_attention_deficit",
         "limited working memory; flags visually or phonetically complex words and sentences "
         "longer than 15 words or with multiple relative clauses"});
    register_persona(
        {"senior", "Senior Reader", "reader_senior",
         "age-related decline; flags long or grammatically complex sentences and unfamiliar "
         "systems"});
    register_persona(
        {"learning_difficulties", "Reader with Learning Difficulties",
         "reader_learning_difficulties",
         "limited academic development; flags dense explanations and text that needs "
         "rereading"});
  }

  void register_persona(ReaderPersona persona) {
    const std::string id = persona.id;
    personas_[id] = std::move(persona);
    if (order_end(id)) order_.push_back(id);
  }

  bool has(const std::string& id_or_alias) const {
    return personas_.count(canonical(id_or_alias)) > 0;
  }

  const ReaderPersona& get(const std::string& id_or_alias) const {
    auto it = personas_.find(canonical(id_or_alias));
    if (it == personas_.end()) {
      throw ConfigError("unknown reader persona: " + id_or_alias);
    }
    return it->second;
  }

  std::vector<ReaderPersona> resolve(const std::vector<std::string>& ids) const {
    std::vector<ReaderPersona> out;
    out.reserve(ids.size());
    for (const auto& id : ids) out.push_back(get(id));
    return out;
  }

  static std::vector<std::string> core_ids() {
    return {"elementary", "non_native", "attention_deficit"};
  }

  std::vector<std::string> registered_ids() const { return order_; }

  static std::string canonical(const std::string& id_or_alias) {
    static const std::map<std::string, std::string> aliases = {
        {"ele", "elementary"},
        {"non", "non_native"},
        {"nonnative", "non_native"},
        {"att", "attention_deficit"},
        {"attention", "attention_deficit"},
        {"sen", "senior"},
        {"lea", "learning_difficulties"},
        {"learning", "learning_difficulties"}};
    auto it = aliases.find(id_or_alias);
    return it == aliases.end() ? id_or_alias : it->second;
  }

private:
  bool order_end(const std::string& id) const {
    for (const auto& existing : order_) {
      if (existing == id) return false;
    }
    return true;
  }

  std::map<std::string, ReaderPersona> personas_;
  std::vector<std::string> order_;
};

}  // namespace nrlb::agents
