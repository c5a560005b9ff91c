#pragma once

#include "hlmkit/commands.hpp"
#include "hlmkit/corpus.hpp"
#include "hlmkit/error.hpp"
#include "hlmkit/experiment.hpp"
#include "hlmkit/hlm.hpp"
#include "hlmkit/schema.hpp"
#include "hlmkit/splitkit.hpp"
#include "hlmkit/surprisal.hpp"
#include "hlmkit/svg.hpp"
#include "hlmkit/textstat.hpp"
#include "hlmkit/uid.hpp"
