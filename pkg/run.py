import os

import uvicorn

# Serve the API from the directory this script is in
os.chdir(os.path.dirname(os.path.abspath(__file__)))

if __name__ == "__main__":
    port = int(os.environ.get("PORT", 8383))
    host = os.environ.get("HOST", "127.0.0.1")
    uvicorn.run("vcdim.main:app", host=host, port=port)
