#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "nrlb/agents/agents.hpp"
#include "nrlb/agents/personas.hpp"
#include "nrlb/core/error.hpp"
#include "nrlb/core/io.hpp"

namespace nrlb::pipeline {

using Json = nlohmann::json;

/// Full run configuration. Precedence when assembling a run: CLI flag over
/// config-file key over the built-in default here.
struct RunConfig {
  int rounds = 2;
  int round_cap = 5;  // guardrail: relevance degrades in late rounds
  int checklist_k = 3;
  std::vector<std::string> personas = agents::PersonaRegistry::core_ids();
  std::string backend = "scripted";  // scripted | replay | http
  std::string cassette;              // replay source, or record target with record=true
  bool record = false;
  std::string editor_mode = "deterministic";  // deterministic | llm
  std::string output_dir = "out";
  std::uint64_t run_seed = 42;
  int workers = 1;

  agents::ModelSettings model;

  std::string data_dir;             // empty: NRLB_DATA_DIR or compiled default
  std::string familiar_words_file;  // empty: <data_dir>/dale_chall_familiar_words.txt
  std::string abbreviations_file;   // empty: <data_dir>/abbreviations.txt
  std::string prompt_dir;           // empty: <data_dir>/prompts
  std::string examples_file;        // few-shot examples for the draft prompt

  std::string endpoint;  // http backend only
  std::string api_key_env = "OPENAI_API_KEY";

  bool include_prior_checklists = false;  // expose earlier rounds' checklists to the expert
  int mock_draft_sentences = 8;

  std::filesystem::path resolved_data_dir() const {
    return data_dir.empty() ? default_data_dir() : std::filesystem::path(data_dir);
  }
  std::filesystem::path resolved_familiar_words() const {
    return familiar_words_file.empty()
               ? resolved_data_dir() / "dale_chall_familiar_words.txt"
               : std::filesystem::path(familiar_words_file);
  }
  std::filesystem::path resolved_abbreviations() const {
    return abbreviations_file.empty() ? resolved_data_dir() / "abbreviations.txt"
                                      : std::filesystem::path(abbreviations_file);
  }
  std::filesystem::path resolved_prompt_dir() const {
    return prompt_dir.empty() ? resolved_data_dir() / "prompts"
                              : std::filesystem::path(prompt_dir);
  }

  void validate(const agents::PersonaRegistry& registry) const {
    if (rounds < 0) throw ConfigError("rounds must be >= 0");
    if (rounds > round_cap) {
      throw ConfigError("rounds (" + std::to_string(rounds) + ") exceeds the round cap (" +
                        std::to_string(round_cap) + ")");
    }
    if (checklist_k < 1) throw ConfigError("checklist k must be >= 1");
    if (personas.empty()) throw ConfigError("at least one reader persona is required");
    for (const auto& persona : personas) {
      if (!registry.has(persona)) throw ConfigError("unknown reader persona: " + persona);
    }
    if (backend != "scripted" && backend != "replay" && backend != "http") {
      throw ConfigError("backend must be scripted, replay, or http");
    }
    if (backend == "replay" && cassette.empty()) {
      throw ConfigError("replay backend needs --cassette");
    }
    if (backend == "http" && endpoint.empty()) {
      throw ConfigError("http backend needs --endpoint");
    }
    if (editor_mode != "deterministic" && editor_mode != "llm") {
      throw ConfigError("editor mode must be deterministic or llm");
    }
    if (workers < 1) throw ConfigError("workers must be >= 1");
    if (output_dir.empty()) throw ConfigError("output dir must not be empty");
  }

  Json to_json() const {
    return Json{{"rounds", rounds},
                {"round_cap", round_cap},
                {"checklist_k", checklist_k},
                {"personas", personas},
                {"backend", backend},
                {"cassette", cassette},
                {"record", record},
                {"editor_mode", editor_mode},
                {"output_dir", output_dir},
                {"run_seed", run_seed},
                {"workers", workers},
                {"model",
                 {{"model_id", model.model_id},
                  {"temperature", model.temperature},
                  {"top_p", model.top_p},
                  {"top_k", model.top_k},
                  {"max_tokens", model.max_tokens}}},
                {"data_dir", data_dir},
                {"familiar_words_file", familiar_words_file},
                {"abbreviations_file", abbreviations_file},
                {"prompt_dir", prompt_dir},
                {"examples_file", examples_file},
                {"endpoint", endpoint},
                {"api_key_env", api_key_env},
                {"include_prior_checklists", include_prior_checklists},
                {"mock_draft_sentences", mock_draft_sentences}};
  }

  /// Applies config-file keys on top of the built-in defaults. Unknown keys
  /// are a ConfigError so typos do not silently fall back to defaults.
  void apply_json(const Json& j) {
    if (!j.is_object()) throw ConfigError("config file root must be a JSON object");
    for (const auto& [key, value] : j.items()) {
      try {
        if (key == "rounds") rounds = value.get<int>();
        else if (key == "round_cap") round_cap = value.get<int>();
        else if (key == "checklist_k") checklist_k = value.get<int>();
        else if (key == "personas") personas = value.get<std::vector<std::string>>();
        else if (key == "backend") backend = value.get<std::string>();
        else if (key == "cassette") cassette = value.get<std::string>();
        else if (key == "record") record = value.get<bool>();
        else if (key == "editor_mode") editor_mode = value.get<std::string>();
        else if (key == "output_dir") output_dir = value.get<std::string>();
        else if (key == "run_seed") run_seed = value.get<std::uint64_t>();
        else if (key == "workers") workers = value.get<int>();
        else if (key == "model") {
          if (value.contains("model_id")) model.model_id = value["model_id"].get<std::string>();
          if (value.contains("temperature")) model.temperature = value["temperature"].get<double>();
          if (value.contains("top_p")) model.top_p = value["top_p"].get<double>();
          if (value.contains("top_k")) model.top_k = value["top_k"].get<int>();
          if (value.contains("max_tokens")) model.max_tokens = value["max_tokens"].get<int>();
        }
        else if (key == "data_dir") data_dir = value.get<std::string>();
        else if (key == "familiar_words_file") familiar_words_file = value.get<std::string>();
        else if (key == "abbreviations_file") abbreviations_file = value.get<std::string>();
        else if (key == "prompt_dir") prompt_dir = value.get<std::string>();
        else if (key == "examples_file") examples_file = value.get<std::string>();
        else if (key == "endpoint") endpoint = value.get<std::string>();
        else if (key == "api_key_env") api_key_env = value.get<std::string>();
        else if (key == "include_prior_checklists") include_prior_checklists = value.get<bool>();
        else if (key == "mock_draft_sentences") mock_draft_sentences = value.get<int>();
        else throw ConfigError("unknown config key: " + key);
      } catch (const Json::exception& e) {
        throw ConfigError("config key '" + key + "' has the wrong type: " + e.what());
      }
    }
  }

  static RunConfig from_file(const std::filesystem::path& path) {
    Json j = Json::parse(read_file(path), nullptr, false);
    if (j.is_discarded()) throw ConfigError("config file is not valid JSON: " + path.string());
    RunConfig cfg;
    cfg.apply_json(j);
    return cfg;
  }
};

}  // namespace nrlb::pipeline
