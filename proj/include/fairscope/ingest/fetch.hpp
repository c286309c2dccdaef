#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>

#include <curl/curl.h>
#include <openssl/evp.h>

#include "fairscope/error.hpp"

namespace fairscope {

/// Lower-case hex SHA-256 of a file's bytes.
inline std::string sha256_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open " + path.string() + " for hashing");
    }
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
        throw Error("sha256 initialisation failed");
    }
    std::array<char, 1 << 16> buf{};
    while (in) {
        in.read(buf.data(), buf.size());
        if (const auto got = in.gcount(); got > 0) {
            EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(got));
        }
    }
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx.get(), md.data(), &len);
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned i = 0; i < len; ++i) {
        out.push_back(hex[md[i] >> 4]);
        out.push_back(hex[md[i] & 0xf]);
    }
    return out;
}

inline std::string normalize_digest(std::string digest)
{
    std::transform(digest.begin(), digest.end(), digest.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return digest;
}

/// Raised when a downloaded file does not hash to the expected digest.
class DigestMismatch : public FetchError {
public:
    DigestMismatch(std::string expected, std::string actual)
        : FetchError("digest mismatch: expected " + expected + ", actual " + actual),
          expected_(std::move(expected)), actual_(std::move(actual))
    {
    }
    const std::string& expected() const { return expected_; }
    const std::string& actual() const { return actual_; }

private:
    std::string expected_;
    std::string actual_;
};

namespace fetch_detail {

inline std::size_t write_to_file(char* data, std::size_t size, std::size_t nmemb, void* user)
{
    auto* out = static_cast<std::ofstream*>(user);
    out->write(data, static_cast<std::streamsize>(size * nmemb));
    return out->good() ? size * nmemb : 0;
}

inline void download(const std::string& url, const std::filesystem::path& dest)
{
    std::ofstream out(dest, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw FetchError("cannot write " + dest.string());
    }
    std::unique_ptr<CURL, decltype(&curl_easy_cleanup)> curl(curl_easy_init(), &curl_easy_cleanup);
    if (!curl) {
        throw FetchError("libcurl initialisation failed");
    }
    char err[CURL_ERROR_SIZE] = {0};
    curl_easy_setopt(curl.get(), CURLOPT_URL, url.c_str());
    curl_easy_setopt(curl.get(), CURLOPT_FOLLOWLOCATION, 1L);
    curl_easy_setopt(curl.get(), CURLOPT_FAILONERROR, 1L);
    curl_easy_setopt(curl.get(), CURLOPT_ERRORBUFFER, err);
    curl_easy_setopt(curl.get(), CURLOPT_WRITEFUNCTION, &write_to_file);
    curl_easy_setopt(curl.get(), CURLOPT_WRITEDATA, &out);
    const CURLcode rc = curl_easy_perform(curl.get());
    out.close();
    if (rc != CURLE_OK) {
        std::error_code ec;
        std::filesystem::remove(dest, ec);
        throw FetchError("download of " + url + " failed: " + (err[0] != 0 ? err : curl_easy_strerror(rc)));
    }
}

}  // namespace fetch_detail

/// Downloads `url` to `dest` and verifies its SHA-256. An existing file that
/// already matches is returned without touching the network. On mismatch the
/// downloaded file is removed and DigestMismatch is thrown.
inline std::filesystem::path fetch_dataset(const std::string& url, const std::string& sha256,
                                           const std::filesystem::path& dest)
{
    const auto expected = normalize_digest(sha256);
    if (std::filesystem::exists(dest) && sha256_file(dest) == expected) {
        return dest;
    }
    if (dest.has_parent_path()) {
        std::filesystem::create_directories(dest.parent_path());
    }
    auto partial = dest;
    partial += ".part";
    fetch_detail::download(url, partial);
    const auto actual = sha256_file(partial);
    if (actual != expected) {
        std::error_code ec;
        std::filesystem::remove(partial, ec);
        throw DigestMismatch(expected, actual);
    }
    std::filesystem::rename(partial, dest);
    return dest;
}

}  // namespace fairscope
