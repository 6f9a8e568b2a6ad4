#pragma once

#include "lcforge/chat.hpp"
#include "lcforge/context.hpp"
#include "lcforge/core.hpp"
#include "lcforge/docgen.hpp"
#include "lcforge/error.hpp"
#include "lcforge/gateway.hpp"
#include "lcforge/http_backend.hpp"
#include "lcforge/judge.hpp"
#include "lcforge/names.hpp"
#include "lcforge/pipeline.hpp"
#include "lcforge/report.hpp"
#include "lcforge/rules.hpp"
#include "lcforge/scenario.hpp"
#include "lcforge/schema.hpp"
#include "lcforge/store.hpp"
#include "lcforge/templating.hpp"
#include "lcforge/text.hpp"
