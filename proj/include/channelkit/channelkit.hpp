#ifndef CHANNELKIT_CHANNELKIT_HPP
#define CHANNELKIT_CHANNELKIT_HPP

#include "channelkit/error.hpp"
#include "channelkit/setcat.hpp"
#include "channelkit/sequent.hpp"
#include "channelkit/classification.hpp"
#include "channelkit/theory.hpp"
#include "channelkit/logic.hpp"
#include "channelkit/environment.hpp"
#include "channelkit/channel.hpp"
#include "channelkit/workspace.hpp"
#include "channelkit/commands.hpp"

#endif  // CHANNELKIT_CHANNELKIT_HPP
