#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "nrlb/core/error.hpp"
#include "nrlb/core/strings.hpp"

namespace nrlb::agents {

enum class Genre { AcademicPaper, PolicyReport, LegislativeBill, PatentDocument };
enum class ExpertRole { Biomedical, Policy, Legal, Patent };

inline std::string to_string(Genre g) {
  switch (g) {
    case Genre::AcademicPaper: return "Academic Paper";
    case Genre::PolicyReport: return "Policy Report";
    case Genre::LegislativeBill: return "Legislative Bill";
    case Genre::PatentDocument: return "Patent Document";
  }
  return "Academic Paper";
}

inline std::string to_string(ExpertRole e) {
  switch (e) {
    case ExpertRole::Biomedical: return "Biomedical";
    case ExpertRole::Policy: return "Policy";
    case ExpertRole::Legal: return "Legal";
    case ExpertRole::Patent: return "Patent";
  }
  return "Biomedical";
}

namespace detail {
inline std::string label_key(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (strings::is_alpha(c)) out.push_back(strings::to_lower(c));
  }
  return out;
}
}  // namespace detail

/// Tolerant of case, spacing, and underscores; anything outside the four
/// labels is an UnknownLabelError.
inline Genre parse_genre(std::string_view label) {
  std::string key = detail::label_key(label);
  if (key == "academicpaper" || key == "paper" || key == "academic") return Genre::AcademicPaper;
  if (key == "policyreport" || key == "report" || key == "policy") return Genre::PolicyReport;
  if (key == "legislativebill" || key == "bill" || key == "legislative") {
    return Genre::LegislativeBill;
  }
  if (key == "patentdocument" || key == "patent") return Genre::PatentDocument;
  throw UnknownLabelError("unknown document type label: " + std::string(label));
}

inline ExpertRole parse_expert(std::string_view label) {
  std::string key = detail::label_key(label);
  if (key == "biomedical" || key == "biomedicalexpert") return ExpertRole::Biomedical;
  if (key == "policy" || key == "policyexpert") return ExpertRole::Policy;
  if (key == "legal" || key == "legalexpert") return ExpertRole::Legal;
  if (key == "patent" || key == "patentexpert") return ExpertRole::Patent;
  throw UnknownLabelError("unknown expert label: " + std::string(label));
}

/// Fixed genre-to-expert routing; the Planner may override it explicitly for
/// ambiguous documents.
inline ExpertRole expert_for(Genre g) {
  switch (g) {
    case Genre::AcademicPaper: return ExpertRole::Biomedical;
    case Genre::PolicyReport: return ExpertRole::Policy;
    case Genre::LegislativeBill: return ExpertRole::Legal;
    case Genre::PatentDocument: return ExpertRole::Patent;
  }
  return ExpertRole::Biomedical;
}

struct TemplateSlot {
  std::string label;
  std::string guidance;
  int min_sentences = 1;
  int max_sentences = 2;
};

struct SummaryTemplate {
  Genre genre = Genre::AcademicPaper;
  std::vector<TemplateSlot> slots;
};

/// Slot-based summary templates aligned with each genre's writing
/// conventions (GAO style for policy reports, CRS style for bills).
inline const SummaryTemplate& template_for(Genre g) {
  static const SummaryTemplate academic{
      Genre::AcademicPaper,
      {{"Background", "the problem area and why it matters", 1, 2},
       {"Objectives", "what the study set out to do", 1, 1},
       {"Methods", "the experimental design in plain terms", 1, 2},
       {"Results", "the key findings", 1, 2},
       {"Conclusions", "what the findings mean for readers", 1, 1}}};
  static const SummaryTemplate policy{
      Genre::PolicyReport,
      {{"Why GAO Did This Study", "the motivation for the review", 1, 2},
       {"What GAO Found", "the key findings", 2, 3},
       {"What GAO Recommends", "the recommendations made", 1, 2}}};
  static const SummaryTemplate bill{
      Genre::LegislativeBill,
      {{"Context", "the situation the bill responds to", 1, 2},
       {"Provisions", "what the bill requires or establishes", 2, 3},
       {"Amendments", "what existing law it changes", 1, 1},
       {"Implementation", "who carries it out and how", 1, 1}}};
  static const SummaryTemplate patent{
      Genre::PatentDocument,
      {{"Technical Field", "the area of technology", 1, 1},
       {"Problem", "the shortcoming the invention addresses", 1, 1},
       {"Solution", "how the invention solves it", 1, 2},
       {"Key Features", "the distinctive parts of the invention", 1, 2},
       {"Applications", "where the invention can be used", 1, 1}}};
  switch (g) {
    case Genre::AcademicPaper: return academic;
    case Genre::PolicyReport: return policy;
    case Genre::LegislativeBill: return bill;
    case Genre::PatentDocument: return patent;
  }
  return academic;
}

inline std::string render_template_slots(const SummaryTemplate& t) {
  std::string out;
  for (const auto& slot : t.slots) {
    out += "- " + slot.label + ": " + slot.guidance + " (" +
           std::to_string(slot.min_sentences) + "-" + std::to_string(slot.max_sentences) +
           " sentences)\n";
  }
  return out;
}

inline std::string expert_persona_text(ExpertRole role) {
  switch (role) {
    case ExpertRole::Biomedical:
      return "You are a biomedical domain expert who writes about research for general readers.";
    case ExpertRole::Policy:
      return "You are a public policy domain expert who writes about government reports for "
             "general readers.";
    case ExpertRole::Legal:
      return "You are a legal domain expert who writes about legislation for general readers.";
    case ExpertRole::Patent:
      return "You are a patent domain expert who writes about inventions for general readers.";
  }
  return "You are a domain expert who writes for general readers.";
}

inline std::string genre_guidelines(Genre g) {
  switch (g) {
    case Genre::AcademicPaper:
      return "- Summarize the experimental design in the methods slot and the key findings in "
             "the results slot.\n- Keep a neutral, factual tone and avoid statistics jargon.";
    case Genre::PolicyReport:
      return "- Lead with why the review was done, then the findings, then the "
             "recommendations.\n- Name the agencies involved and avoid bureaucratic phrasing.";
    case Genre::LegislativeBill:
      return "- State plainly what the bill changes and who is affected.\n- Avoid citing "
             "section numbers unless they carry meaning for the reader.";
    case Genre::PatentDocument:
      return "- Describe what the invention does before how it works.\n- Replace claim "
             "language with everyday wording.";
  }
  return "";
}

}  // namespace nrlb::agents
