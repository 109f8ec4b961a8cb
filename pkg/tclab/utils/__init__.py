from .terminal import (
    highlight_json,
    show_json
)
from .fileio import (
    mkdir_p,
    print_json,
    read_file,
    read_json,
    write_csv,
    write_file,
    write_json
)
