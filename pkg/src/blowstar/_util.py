"""Small shared helpers."""

from concurrent.futures import ThreadPoolExecutor


def pmap(fn, items, jobs=1):
    """Order-preserving map, threaded when jobs > 1.

    All toolkit values are immutable after construction, so mapping over
    charts concurrently is safe; the basis cache is write-once per key.
    """
    items = list(items)
    if jobs and jobs > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(fn, items))
    return [fn(x) for x in items]
