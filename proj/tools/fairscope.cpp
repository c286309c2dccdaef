#include <curl/curl.h>

#include "fairscope/cli/commands.hpp"

int main(int argc, char** argv)
{
    curl_global_init(CURL_GLOBAL_DEFAULT);
    const int rc = fairscope::cli::run(argc, argv);
    curl_global_cleanup();
    return rc;
}
