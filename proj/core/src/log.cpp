#include "aeids/log.hpp"

#include <iostream>
#include <mutex>
#include <utility>

namespace aeids {
namespace {

std::mutex& handler_mutex() {
    static std::mutex m;
    return m;
}

MessageHandler& handler() {
    static MessageHandler h = [](std::string_view msg) { std::cerr << "warning: " << msg << '\n'; };
    return h;
}

}  // namespace

MessageHandler set_warning_handler(MessageHandler h) {
    std::lock_guard lock(handler_mutex());
    return std::exchange(handler(), std::move(h));
}

void warn(std::string_view message) {
    std::lock_guard lock(handler_mutex());
    if (handler()) handler()(message);
}

}  // namespace aeids
