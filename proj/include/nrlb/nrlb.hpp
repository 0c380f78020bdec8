#pragma once

// Umbrella header for the full engine.

#include "nrlb/agents/agents.hpp"
#include "nrlb/agents/mock_agents.hpp"
#include "nrlb/checklist/checklist.hpp"
#include "nrlb/editor/editor.hpp"
#include "nrlb/eval/dataset.hpp"
#include "nrlb/eval/report.hpp"
#include "nrlb/eval/sampling.hpp"
#include "nrlb/gateway/cassette.hpp"
#include "nrlb/gateway/gateway.hpp"
#include "nrlb/gateway/http_backend.hpp"
#include "nrlb/gateway/json_extract.hpp"
#include "nrlb/pipeline/runner.hpp"
#include "nrlb/text/readability.hpp"
#include "nrlb/text/rouge.hpp"
#include "nrlb/text/tokenizer.hpp"
