#ifndef SQPSIM_SIM_CHECK_H_
#define SQPSIM_SIM_CHECK_H_

#include <cstdio>
#include <cstdlib>

// Contract check that stays enabled in release builds. A failed check is a
// programming error, not a recoverable condition.
#define SQPSIM_CHECK(cond, msg)                                          \
  do {                                                                   \
    if (!(cond)) {                                                       \
      std::fprintf(stderr, "%s:%d: check failed: %s: %s\n", __FILE__,    \
                   __LINE__, #cond, msg);                                \
      std::abort();                                                      \
    }                                                                    \
  } while (0)

#endif  // SQPSIM_SIM_CHECK_H_
