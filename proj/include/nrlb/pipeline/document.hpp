#pragma once

#include <string>

namespace nrlb::pipeline {

/// Raw input text plus dataset/record identity.
struct SourceDocument {
  std::string id;
  std::string text;
  std::string reference;  // human-written reference summary; may be empty
  std::string dataset_name;

  bool operator==(const SourceDocument&) const = default;
};

}  // namespace nrlb::pipeline
