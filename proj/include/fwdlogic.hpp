#pragma once

#include "fwdlogic/name.hpp"
#include "fwdlogic/error.hpp"
#include "fwdlogic/types.hpp"
#include "fwdlogic/queue.hpp"
#include "fwdlogic/context.hpp"
#include "fwdlogic/process.hpp"
#include "fwdlogic/forwarder_typing.hpp"
#include "fwdlogic/cp_typing.hpp"
#include "fwdlogic/synthesis.hpp"
#include "fwdlogic/lts.hpp"
#include "fwdlogic/mcut.hpp"
#include "fwdlogic/identity.hpp"
#include "fwdlogic/parser.hpp"
#include "fwdlogic/json_export.hpp"
