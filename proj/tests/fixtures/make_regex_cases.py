"""Generates regex_cases.tsv: labelled inputs for the format recognizers.

Each line is `text<TAB>expected`, where expected is a `;`-separated list of
`Label=surface` pairs (or `-` for no match). Labels come from how each case
is constructed, not from running the recognizers.
"""
import random

rng = random.Random(20240611)
HEX = "0123456789abcdefABCDEF"
cases = []


def add(text, *expected):
    cases.append((text, ";".join(f"{l}={s}" for l, s in expected) or "-"))


def hexstr(n):
    # First character is a letter so the string never looks like a number.
    return rng.choice("abcdefABCDEF") + "".join(rng.choice(HEX) for _ in range(n - 1))


# IPv4: valid octets 0..255, invalid when any octet exceeds 255.
for _ in range(24):
    ip = ".".join(str(rng.randint(0, 255)) for _ in range(4))
    add(f"Connection from {ip} observed", ("IP_Address", ip))
for bad in ["256.1.1.1", "999.1.1.1", "1.2.3.256", "10.300.0.1", "1.2.3", "1.2.3.4.5", "01.2.3.4", "192.168.1.1000"]:
    add(f"Connection from {bad} observed")
for edge in ["0.0.0.0", "255.255.255.255", "10.0.0.1"]:
    add(f"Scanner hit {edge}.", ("IP_Address", edge))

# IPv4 followed by a port.
for port in [22, 80, 443, 8080, 65535, 0]:
    ip = f"10.{rng.randint(0, 255)}.{rng.randint(0, 255)}.{rng.randint(1, 254)}"
    add(f"beacon to {ip}:{port} every minute", ("IP_Address", ip), ("Port", str(port)))
for port in [65536, 99999]:
    add(f"beacon to 10.0.0.5:{port} every minute", ("IP_Address", "10.0.0.5"))

# IPv6.
for ip in ["2001:db8::1", "fe80::1ff:fe23:4567:890a", "::1", "2001:0db8:85a3:0000:0000:8a2e:0370:7334",
           "::ffff:192.0.2.128"]:
    add(f"resolved to {ip} yesterday", ("IP_Address", ip))
for bad in ["12:30:45", "00:1a:2b:3c:4d:5e", "2001:db8:::1"]:
    add(f"logged {bad} in the trace")

# Hashes: exactly 32, 40 or 64 hex characters.
for n in [32, 40, 64]:
    for _ in range(10):
        h = hexstr(n)
        add(f"sample {h} was uploaded", ("Hash", h))
for n in [31, 33, 39, 41, 63, 65]:
    for _ in range(3):
        add(f"sample {hexstr(n)} was uploaded")
for _ in range(3):
    h = hexstr(31) + "g"
    add(f"sample {h} was uploaded")
add("md5 D41D8CD98F00B204E9800998ECF8427E here", ("Hash", "D41D8CD98F00B204E9800998ECF8427E"))
add("md5 d41d8cd98f00b204e9800998ecf8427e here", ("Hash", "d41d8cd98f00b204e9800998ecf8427e"))

# CVE identifiers.
for _ in range(12):
    digits = rng.randint(4, 7)
    cve = f"CVE-{rng.randint(1999, 2024)}-{rng.randint(0, 10 ** digits - 1):0{digits}d}"
    add(f"patched {cve} last week", ("CVE", cve))
add("patched cve-2014-0160 last week", ("CVE", "cve-2014-0160"))
add("patched CVE-2021-44228.", ("CVE", "CVE-2021-44228"))
add("patched CVE-2019-1234567 too", ("CVE", "CVE-2019-1234567"))
for bad in ["CVE-2021-123", "CVE-21-1234", "CVE-2021-12345678", "CVE2021-1234", "XCVE-2021-1234"]:
    add(f"patched {bad} last week")

# Ports after a trigger word.
for port in [21, 22, 25, 53, 80, 443, 3389, 4444, 8443, 65535, 0]:
    add(f"the implant listens on port {port} for commands", ("Port", str(port)))
add("it scans ports 1433 and 3306", ("Port", "1433"))
add("Port 8080 was open", ("Port", "8080"))
for bad in ["port 65536", "port 100000", "support 80", "passport 22", "port eighty", "portal 80"]:
    add(f"we saw {bad} today")

# Email addresses.
for email in ["admin@example.com", "user.name+tag@mail.example.co.uk", "x_y@sub.domain.org", "ops-team@corp.example.net",
              "a1@b2.io", "first.last@example.museum"]:
    add(f"contact {email} today", ("Email", email))
for bad in ["admin@localhost", "@example.com", "user@example.c", "user@", "user@-bad.com"]:
    add(f"contact {bad} today")

# URLs with an http, https or ftp scheme and an authority.
for url in ["http://example.com", "https://evil.example.org/path/a.php?id=1", "ftp://files.example.net/x.zip",
            "https://cdn.example.com:8443/payload.bin", "HTTP://UPPER.EXAMPLE.COM/X", "http://a.b.c/d#frag"]:
    add(f"download from {url} now", ("URL", url))
add("see http://10.0.0.1/x.sh.", ("URL", "http://10.0.0.1/x.sh"))
add("(https://example.com/a)", ("URL", "https://example.com/a"))
for bad in ["hxxp://evil.com", "www.example.com", "http://", "mailto:x@", "gopher://example.com"]:
    add(f"download from {bad} now")

# Mixed sentences.
add("Emotet at 185.12.3.4:443 dropped d41d8cd98f00b204e9800998ecf8427e via CVE-2017-11882.",
    ("IP_Address", "185.12.3.4"), ("Port", "443"), ("Hash", "d41d8cd98f00b204e9800998ecf8427e"),
    ("CVE", "CVE-2017-11882"))
add("Mail phish@bad.example and visit https://bad.example/login then port 25",
    ("Email", "phish@bad.example"), ("URL", "https://bad.example/login"), ("Port", "25"))
add("nothing to see here")
add("version 10.2 of the tool")
add("")

# Pad with further valid IPs and hashes until exactly 200 cases.
while len(cases) < 200:
    if len(cases) % 2:
        ip = ".".join(str(rng.randint(0, 255)) for _ in range(4))
        add(f"C2 server {ip} responded", ("IP_Address", ip))
    else:
        h = hexstr(rng.choice([32, 40, 64]))
        add(f"hash {h}", ("Hash", h))

assert len(cases) == 200, len(cases)
with open("regex_cases.tsv", "w") as f:
    f.write("# text<TAB>expected (Label=surface;...; '-' for none). Generated by make_regex_cases.py\n")
    for text, exp in cases:
        f.write(f"{text}\t{exp}\n")
